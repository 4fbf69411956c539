#pragma once

// Independent reference computations shared by the unit tests and the acceptance run.

#include <cmath>
#include <vector>

#include "gtflux/mlp.hpp"
#include "gtflux/quadrature.hpp"

namespace oracles {

using namespace gtflux;

/// Least-squares slope of log e against log h.
inline double log_slope(const std::vector<double>& h, const std::vector<double>& e) {
  const double n = static_cast<double>(h.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < h.size(); ++i) mx += std::log(h[i]), my += std::log(e[i]);
  mx /= n, my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    sxy += (std::log(h[i]) - mx) * (std::log(e[i]) - my);
    sxx += (std::log(h[i]) - mx) * (std::log(h[i]) - mx);
  }
  return sxy / sxx;
}

/// Alpha minimizing |alpha g + (1 - alpha) h - f| on a 1e-4 grid; ties go to the larger alpha.
inline double brute_alpha(const Flux& f, const Flux& g, const Flux& h) {
  double best = 1e300, best_alpha = 1.0;
  for (int j = 0; j <= 10000; ++j) {
    const double beta = j * 1e-4;
    const double r = norm2(g + beta * (h - g) - f);
    if (r < best) best = r, best_alpha = 1.0 - beta;
  }
  return best_alpha;
}

/// Periodic interface fluxes of `kind` on plain cell data.
inline std::vector<Flux> periodic_fluxes(BaseFlux kind, const std::vector<State>& cells, const GasModel& gas) {
  PaddedField u(cells, required_ghosts(kind), BoundaryKind::periodic);
  return interface_fluxes(kind, u, gas, Exec::serial).flux;
}

/// Time average over [0, dt] of the interface fluxes along the semidiscrete
/// solution: `sub` classical RK4 substeps, Simpson's rule per substep.
inline std::vector<Flux> reference_flux_average(BaseFlux kind, std::vector<State> u, double dt, double dx,
                                                int sub, const GasModel& gas) {
  const double h = dt / sub;
  std::vector<Flux> acc(u.size() + 1);
  auto rhs = [&](const std::vector<State>& v) {
    const auto f = periodic_fluxes(kind, v, gas);
    std::vector<State> r(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) r[k] = (-1.0 / dx) * (f[k + 1] - f[k]);
    return r;
  };
  auto axpy = [](const std::vector<State>& a, double s, const std::vector<State>& b) {
    std::vector<State> o(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) o[k] = a[k] + s * b[k];
    return o;
  };
  for (int s = 0; s < sub; ++s) {
    const auto k1 = rhs(u);
    const auto k2 = rhs(axpy(u, 0.5 * h, k1));
    const auto k3 = rhs(axpy(u, 0.5 * h, k2));
    const auto k4 = rhs(axpy(u, h, k3));
    std::vector<State> next(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) next[k] = u[k] + (h / 6.0) * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
    // midpoint state from the second RK4 stage
    const auto f0 = periodic_fluxes(kind, u, gas), fm = periodic_fluxes(kind, axpy(u, 0.5 * h, k2), gas),
               f1 = periodic_fluxes(kind, next, gas);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += (h / 6.0) * (f0[i] + 4.0 * fm[i] + f1[i]);
    u = next;
  }
  for (auto& a : acc) a *= 1.0 / dt;
  return acc;
}

/// u_k - lambda (F_{k+1} - F_k).
inline std::vector<State> euler_update(const std::vector<State>& u, const std::vector<Flux>& f, double lambda) {
  std::vector<State> out(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) out[k] = u[k] - lambda * (f[k + 1] - f[k]);
  return out;
}

/// Direct SSPRK(2,2) and SSPRK(3,3) updates of the semidiscrete scheme of `kind`.
inline std::vector<State> direct_ssprk(BaseFlux kind, TimeQuadrature q, const std::vector<State>& u,
                                       double lambda, const GasModel& gas) {
  const std::size_t n = u.size();
  const auto u1 = euler_update(u, periodic_fluxes(kind, u, gas), lambda);
  const auto e1 = euler_update(u1, periodic_fluxes(kind, u1, gas), lambda);
  std::vector<State> out(n);
  if (q == TimeQuadrature::ssprk22) {
    for (std::size_t k = 0; k < n; ++k) out[k] = 0.5 * u[k] + 0.5 * e1[k];
    return out;
  }
  std::vector<State> u2(n);
  for (std::size_t k = 0; k < n; ++k) u2[k] = 0.75 * u[k] + 0.25 * e1[k];
  const auto e2 = euler_update(u2, periodic_fluxes(kind, u2, gas), lambda);
  for (std::size_t k = 0; k < n; ++k) out[k] = (1.0 / 3.0) * u[k] + (2.0 / 3.0) * e2[k];
  return out;
}

/// |backprop - central differences| / |central differences| over all parameters (2-norms).
inline double gradient_error(const MlpModel& model, const Dataset& data, LossKind kind, double step = 1e-5) {
  std::vector<std::size_t> batch(data.size());
  for (std::size_t i = 0; i < batch.size(); ++i) batch[i] = i;
  MlpModel grad = MlpModel::zeros(model.dims);
  backprop(model, data, batch, kind, grad);
  MlpModel probe = model, scratch = MlpModel::zeros(model.dims);
  double diff2 = 0, norm2 = 0;
  for (std::size_t p = 0; p < model.parameter_count(); ++p) {
    const double orig = probe.parameter(p);
    probe.parameter(p) = orig + step;
    const double up = backprop(probe, data, batch, kind, scratch);
    probe.parameter(p) = orig - step;
    const double down = backprop(probe, data, batch, kind, scratch);
    probe.parameter(p) = orig;
    const double fd = (up - down) / (2 * step);
    diff2 += (fd - grad.parameter(p)) * (fd - grad.parameter(p));
    norm2 += fd * fd;
  }
  return std::sqrt(diff2 / norm2);
}

}  // namespace oracles
