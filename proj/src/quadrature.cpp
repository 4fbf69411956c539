#include "gtflux/quadrature.hpp"

#include <array>
#include <atomic>
#include <limits>

namespace gtflux {

namespace {

constexpr std::array<double, 1> kEulerWeights{1.0};
constexpr std::array<double, 2> kRk22Weights{0.5, 0.5};
constexpr std::array<double, 3> kRk33Weights{1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0};

void axpy(std::vector<Flux>& acc, double w, const std::vector<Flux>& f) {
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += w * f[i];
}
void axpy(std::vector<double>& acc, double w, const std::vector<double>& f) {
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += w * f[i];
}

// Smallest inadmissible interior index, or -1; order independent so both
// execution paths report the same cell.
long scan_inadmissible(const PaddedField& v, const GasModel& gas, Exec exec) {
  const long n = static_cast<long>(v.n_cells());
  std::atomic<long> bad{std::numeric_limits<long>::max()};
  for_each_index(exec, n, [&](std::ptrdiff_t k) {
    if (!is_admissible(v.cell(k), gas)) {
      long cur = bad.load();
      while (k < cur && !bad.compare_exchange_weak(cur, k)) {
      }
    }
  });
  const long b = bad.load();
  return b == std::numeric_limits<long>::max() ? -1 : b;
}

}  // namespace

const char* to_string(TimeQuadrature q) {
  switch (q) {
    case TimeQuadrature::forward_euler: return "forward-euler";
    case TimeQuadrature::ssprk22: return "ssprk22";
    case TimeQuadrature::ssprk33: return "ssprk33";
  }
  return "?";
}

std::span<const double> quadrature_weights(TimeQuadrature q) {
  switch (q) {
    case TimeQuadrature::forward_euler: return kEulerWeights;
    case TimeQuadrature::ssprk22: return kRk22Weights;
    case TimeQuadrature::ssprk33: return kRk33Weights;
  }
  return {};
}

int required_ghosts(BaseFlux kind) { return stencil_half_width(kind) + 1; }

InterfaceFluxes interface_fluxes(BaseFlux kind, const PaddedField& u, const GasModel& gas,
                                 Exec exec, bool with_entropy) {
  const int hw = stencil_half_width(kind);
  if (u.ghosts() < hw) throw std::invalid_argument("interface_fluxes: halo too narrow");
  const long n_if = static_cast<long>(u.n_cells()) + 1;
  InterfaceFluxes out;
  out.flux.resize(static_cast<std::size_t>(n_if));
  if (with_entropy) out.entropy.resize(static_cast<std::size_t>(n_if));
  for_each_index(exec, n_if, [&](std::ptrdiff_t i) {
    const auto window = u.window(i - hw, static_cast<std::size_t>(2 * hw));
    out.flux[static_cast<std::size_t>(i)] = numerical_flux(kind, window, gas);
    if (with_entropy)
      out.entropy[static_cast<std::size_t>(i)] = numerical_entropy_flux(kind, window, gas);
  });
  return out;
}

PaddedField forward_euler_stage(const PaddedField& v, std::span<const Flux> fluxes, double lambda,
                                const GasModel& gas, Exec exec) {
  PaddedField out = v;
  const long n = static_cast<long>(v.n_cells());
  for_each_index(exec, n, [&](std::ptrdiff_t k) {
    out.cell(k) = v.cell(k) - lambda * (fluxes[static_cast<std::size_t>(k + 1)] -
                                        fluxes[static_cast<std::size_t>(k)]);
  });
  if (const long bad = scan_inadmissible(out, gas, exec); bad >= 0)
    throw PositivityError("stage state inadmissible", bad);
  out.fill_ghosts();
  return out;
}

PaddedField combine_stages(double a, const PaddedField& x, double b, const PaddedField& y,
                           const GasModel& gas, Exec exec) {
  PaddedField out = x;
  const long n = static_cast<long>(x.n_cells());
  for_each_index(exec, n, [&](std::ptrdiff_t k) { out.cell(k) = a * x.cell(k) + b * y.cell(k); });
  if (const long bad = scan_inadmissible(out, gas, exec); bad >= 0)
    throw PositivityError("stage state inadmissible", bad);
  out.fill_ghosts();
  return out;
}

InterfaceFluxes rk_quadrature_flux(BaseFlux kind, TimeQuadrature scheme, const PaddedField& u,
                                   double lambda, const GasModel& gas, Exec exec,
                                   bool with_entropy) {
  InterfaceFluxes f0 = interface_fluxes(kind, u, gas, exec, with_entropy);
  if (scheme == TimeQuadrature::forward_euler) return f0;

  const auto w = quadrature_weights(scheme);
  InterfaceFluxes acc{std::vector<Flux>(f0.flux.size()), {}};
  if (with_entropy) acc.entropy.assign(f0.flux.size(), 0.0);
  auto accumulate = [&](double weight, const InterfaceFluxes& f) {
    axpy(acc.flux, weight, f.flux);
    if (with_entropy) axpy(acc.entropy, weight, f.entropy);
  };

  accumulate(w[0], f0);
  PaddedField u1 = forward_euler_stage(u, f0.flux, lambda, gas, exec);
  InterfaceFluxes f1 = interface_fluxes(kind, u1, gas, exec, with_entropy);
  accumulate(w[1], f1);
  if (scheme == TimeQuadrature::ssprk22) return acc;

  // u2 = 3/4 u + 1/4 (u1 - lambda dF(u1))
  PaddedField euler1 = u1;
  {
    const long n = static_cast<long>(u.n_cells());
    for_each_index(exec, n, [&](std::ptrdiff_t k) {
      euler1.cell(k) = u1.cell(k) - lambda * (f1.flux[static_cast<std::size_t>(k + 1)] -
                                              f1.flux[static_cast<std::size_t>(k)]);
    });
  }
  PaddedField u2 = combine_stages(0.75, u, 0.25, euler1, gas, exec);
  InterfaceFluxes f2 = interface_fluxes(kind, u2, gas, exec, with_entropy);
  accumulate(w[2], f2);
  return acc;
}

InterfaceFluxes rk_quadrature_flux(BaseFlux kind, TimeQuadrature scheme, const FieldSnapshot& field,
                                   BoundaryKind bc, double lambda, const GasModel& gas, Exec exec,
                                   bool with_entropy) {
  PaddedField u(field.states, required_ghosts(kind), bc);
  return rk_quadrature_flux(kind, scheme, u, lambda, gas, exec, with_entropy);
}

}  // namespace gtflux
