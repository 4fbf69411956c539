#include "gtflux/limiters.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gtflux {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Productions below this multiple of the round-off scale (see production())
// are treated as zero. Measured noise on constant states stays under 1 eps.
constexpr double kProductionRoundoff = 16.0 * std::numeric_limits<double>::epsilon();

// Upper limit on the positivity margin; the margin is also capped at half the
// dissipative half-state value so that the dissipative state always satisfies it.
constexpr double kPositivityMargin = 1e-10;

struct Production {
  double value;
  double scale;
};

std::optional<Production> production(const State& u_k, const Flux& flux, double entropy_flux,
                                     double dt, double dx, Side side, const GasModel& gas) {
  const State star = half_cell_state(u_k, flux, dt / dx, side, gas);
  if (!is_admissible(star, gas)) return std::nullopt;
  const double sigma = side == Side::right ? 1.0 : -1.0;
  const auto ek = entropy_pair(u_k, gas);
  const double u_star = entropy_pair(star, gas).U;
  const double value = (u_star - ek.U) / dt + 2.0 * sigma * (entropy_flux - ek.F) / dx;
  // U(u*) - U(u_k) carries the rounding of u* through the gradient w . u*, which
  // can be much larger than |U| itself.
  const Vec3 w = entropy_variables(u_k, gas);
  const double wu = std::abs(w.rho * u_k.rho) + std::abs(w.mom * u_k.mom) + std::abs(w.energy * u_k.energy);
  const double scale = (std::abs(u_star) + std::abs(ek.U) + wu) / dt +
                       2.0 * (std::abs(entropy_flux) + std::abs(ek.F)) / dx;
  return Production{value, scale};
}

double margin_for(double dissipative_value) {
  return std::min(kPositivityMargin, 0.5 * dissipative_value);
}

double raw_pressure(const State& u, const GasModel& gas) {
  if (!(u.rho > 0.0)) return -kInf;
  return (gas.gamma - 1.0) * (u.energy - 0.5 * u.mom * u.mom / u.rho);
}

}  // namespace

State half_cell_state(const State& u_k, const Flux& flux, double lambda, Side side,
                      const GasModel& gas) {
  const Flux fk = physical_flux(u_k, gas);
  if (side == Side::right) return u_k + 2.0 * lambda * (fk - flux);
  return u_k + 2.0 * lambda * (flux - fk);
}

double half_cell_production(const State& u_k, const Flux& flux, double entropy_flux, double dt,
                            double dx, Side side, const GasModel& gas) {
  const auto p = production(u_k, flux, entropy_flux, dt, dx, side, gas);
  if (!p) throw CflError("half-cell state inadmissible; CFL restriction violated");
  return p->value;
}

std::optional<double> try_half_cell_production(const State& u_k, const Flux& flux,
                                               double entropy_flux, double dt, double dx,
                                               Side side, const GasModel& gas) {
  const auto p = production(u_k, flux, entropy_flux, dt, dx, side, gas);
  if (!p) return std::nullopt;
  return p->value;
}

double alpha_condition_f(double s, double p) {
  if (s > 0.0) throw CflError("dissipative entropy production is positive");
  if (p <= 0.0) return 0.0;
  if (std::isinf(p) || s == 0.0) return 1.0;
  return std::clamp(p / (p - s), 0.0, 1.0);
}

std::vector<double> alpha_field_condition_f(const PaddedField& u, const InterfaceFluxes& g,
                                            const InterfaceFluxes& h, double dt, double dx,
                                            const GasModel& gas, Exec exec) {
  if (g.entropy.empty() || h.entropy.empty())
    throw std::invalid_argument("alpha_field_condition_f: entropy fluxes required");
  const long n_if = static_cast<long>(u.n_cells()) + 1;
  std::vector<double> alpha(static_cast<std::size_t>(n_if));

  auto demand = [&](const State& uk, std::size_t i, Side side) {
    const auto s = production(uk, g.flux[i], g.entropy[i], dt, dx, side, gas);
    if (!s) throw CflError("dissipative half-cell state inadmissible; CFL restriction violated");
    double s_val = s->value;
    if (s_val > 0.0) {
      if (s_val > kProductionRoundoff * s->scale)
        throw CflError("dissipative entropy production is positive");
      s_val = 0.0;
    }
    const auto p = production(uk, h.flux[i], h.entropy[i], dt, dx, side, gas);
    if (!p) return 1.0;
    // Where the data is locally flat both productions are round-off; only a
    // resolvable positive p asks for dissipation.
    const double p_val = p->value <= kProductionRoundoff * p->scale ? 0.0 : p->value;
    return alpha_condition_f(s_val, p_val);
  };

  for_each_index(exec, n_if, [&](std::ptrdiff_t i) {
    const auto idx = static_cast<std::size_t>(i);
    const double from_left_cell = demand(u.cell(i - 1), idx, Side::right);
    const double from_right_cell = demand(u.cell(i), idx, Side::left);
    alpha[idx] = std::max(from_left_cell, from_right_cell);
  });
  return alpha;
}

double positivity_functional(const State& u, PositivityFunctional which, double margin,
                             const GasModel& gas) {
  if (which == PositivityFunctional::neg_density) return margin - u.rho;
  const double p = raw_pressure(u, gas);
  return std::isinf(p) ? kInf : margin - p;
}

double positivity_bound(double c_h, double c_g) {
  if (c_g > 0.0) throw CflError("dissipative half-cell state violates positivity");
  if (c_h <= 0.0) return 0.0;
  if (std::isinf(c_h)) return 1.0;
  return std::clamp(c_h / (c_h - c_g), 0.0, 1.0);
}

double alpha_condition_positivity(const State& u_k, const Flux& g, const Flux& h, double lambda,
                                  Side side, PositivityFunctional which, const GasModel& gas) {
  const State g_state = half_cell_state(u_k, g, lambda, side, gas);
  const State h_state = half_cell_state(u_k, h, lambda, side, gas);
  const double g_value =
      which == PositivityFunctional::neg_density ? g_state.rho : raw_pressure(g_state, gas);
  const double margin = margin_for(g_value);
  const double c_g = positivity_functional(g_state, which, margin, gas);
  const double c_h = positivity_functional(h_state, which, margin, gas);
  return positivity_bound(c_h, c_g);
}

namespace {

template <class Bound>
std::vector<double> positivity_field(const PaddedField& u, std::size_t n_if, Exec exec,
                                     Bound&& bound) {
  std::vector<double> alpha(n_if);
  for_each_index(exec, static_cast<std::ptrdiff_t>(n_if), [&](std::ptrdiff_t i) {
    const auto idx = static_cast<std::size_t>(i);
    alpha[idx] = std::max(bound(u.cell(i - 1), idx, Side::right), bound(u.cell(i), idx, Side::left));
  });
  return alpha;
}

}  // namespace

std::vector<double> alpha_field_positivity(const PaddedField& u, std::span<const Flux> g,
                                           std::span<const Flux> h, double lambda,
                                           const GasModel& gas, Exec exec) {
  return positivity_field(u, g.size(), exec, [&](const State& uk, std::size_t i, Side side) {
    return std::max(
        alpha_condition_positivity(uk, g[i], h[i], lambda, side, PositivityFunctional::neg_density, gas),
        alpha_condition_positivity(uk, g[i], h[i], lambda, side, PositivityFunctional::neg_pressure, gas));
  });
}

std::vector<double> alpha_field_positivity(const PaddedField& u, std::span<const Flux> g,
                                           std::span<const Flux> h, double lambda,
                                           PositivityFunctional which, const GasModel& gas,
                                           Exec exec) {
  return positivity_field(u, g.size(), exec, [&](const State& uk, std::size_t i, Side side) {
    return alpha_condition_positivity(uk, g[i], h[i], lambda, side, which, gas);
  });
}

double smoothstep(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  // the polynomial can overshoot 1 by an ulp just below x = 1
  return std::min(1.0, x * x * x * (x * (6.0 * x - 15.0) + 10.0));
}

std::vector<double> sup_mollify(std::span<const double> values, std::span<const double> kernel,
                                bool periodic) {
  if (values.empty()) throw std::invalid_argument("sup_mollify: empty input");
  if (kernel.size() % 2 == 0) throw std::invalid_argument("sup_mollify: kernel needs an odd sample count");
  const long n = static_cast<long>(values.size());
  const long c = static_cast<long>(kernel.size() / 2);
  std::vector<double> out(values.size(), -kInf);
  for (long i = 0; i < n; ++i) {
    for (long off = -c; off <= c; ++off) {
      long j = i - off;
      if (periodic) {
        j = ((j % n) + n) % n;
      } else if (j < 0 || j >= n) {
        continue;
      }
      out[static_cast<std::size_t>(i)] = std::max(
          out[static_cast<std::size_t>(i)], values[static_cast<std::size_t>(j)] * kernel[static_cast<std::size_t>(off + c)]);
    }
  }
  return out;
}

double cut_hat(double x) { return std::max(0.0, std::min({1.0, 2.0 * x + 2.0, -2.0 * x + 2.0})); }

std::vector<double> cut_hat_kernel(int width) {
  if (width < 1 || width % 2 == 0) throw std::invalid_argument("cut_hat_kernel: width must be odd and positive");
  if (width == 1) return {1.0};
  const int c = width / 2;
  const double step = 2.0 / static_cast<double>(width - 1);
  std::vector<double> k(static_cast<std::size_t>(width));
  for (int j = -c; j <= c; ++j) k[static_cast<std::size_t>(j + c)] = cut_hat(j * step);
  return k;
}

std::vector<double> dafermos_predictor(std::span<const double> s_field, const DafermosParams& params,
                                       bool periodic) {
  if (s_field.empty()) throw std::invalid_argument("dafermos_predictor: empty field");
  if (!(params.b > 0.0)) throw std::invalid_argument("dafermos_predictor: b must be positive");
  const std::size_t n = s_field.size();
  const double s_ref = *std::min_element(s_field.begin(), s_field.end());
  if (s_ref >= 0.0) return std::vector<double>(n + 1, 0.0);

  std::vector<double> cell(n);
  for (std::size_t k = 0; k < n; ++k) cell[k] = smoothstep((s_field[k] / s_ref - params.a) / params.b);
  const auto kernel = cut_hat_kernel(params.hat_width);
  const auto mollified = sup_mollify(cell, kernel, periodic);

  std::vector<double> alpha(n + 1);
  alpha[0] = periodic ? std::max(mollified[n - 1], mollified[0]) : mollified[0];
  alpha[n] = periodic ? alpha[0] : mollified[n - 1];
  for (std::size_t i = 1; i < n; ++i) alpha[i] = std::max(mollified[i - 1], mollified[i]);
  return alpha;
}

std::vector<double> llf_entropy_rates(const PaddedField& u, double dt, double dx,
                                      const GasModel& gas, Exec exec) {
  const InterfaceFluxes g = interface_fluxes(BaseFlux::llf, u, gas, exec, true);
  const long n = static_cast<long>(u.n_cells());
  const double lambda = dt / dx;
  std::vector<double> rates(static_cast<std::size_t>(n));
  for_each_index(exec, n, [&](std::ptrdiff_t k) {
    const auto i = static_cast<std::size_t>(k);
    const State next = u.cell(k) - lambda * (g.flux[i + 1] - g.flux[i]);
    if (!is_admissible(next, gas)) throw CflError("LLF step inadmissible; CFL restriction violated");
    rates[i] = (g.entropy[i + 1] - g.entropy[i]) / dx +
               (entropy_pair(next, gas).U - entropy_pair(u.cell(k), gas).U) / dt;
  });
  return rates;
}

Limiter condition_f_limiter() {
  Limiter lim;
  lim.name = "condition-f";
  lim.half_width = 1;
  lim.needs_entropy_fluxes = true;
  lim.alpha = [](const StepContext& ctx) {
    return alpha_field_condition_f(ctx.u, ctx.g, ctx.h, ctx.dt, ctx.dx(), ctx.gas, ctx.exec);
  };
  return lim;
}

Limiter positivity_limiter() {
  Limiter lim;
  lim.name = "positivity";
  lim.half_width = 1;
  lim.alpha = [](const StepContext& ctx) {
    return alpha_field_positivity(ctx.u, ctx.g.flux, ctx.h.flux, ctx.lambda(), ctx.gas, ctx.exec);
  };
  return lim;
}

Limiter dafermos_limiter(const DafermosParams& params) {
  Limiter lim;
  lim.name = "dafermos";
  lim.half_width = 1;
  lim.alpha = [params](const StepContext& ctx) {
    const auto rates = llf_entropy_rates(ctx.u, ctx.dt, ctx.dx(), ctx.gas, ctx.exec);
    return dafermos_predictor(rates, params, ctx.u.boundary() == BoundaryKind::periodic);
  };
  return lim;
}

}  // namespace gtflux
