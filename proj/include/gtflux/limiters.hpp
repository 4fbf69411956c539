#pragma once

#include <optional>
#include <span>
#include <vector>

#include "gtflux/quadrature.hpp"
#include "gtflux/solver.hpp"

namespace gtflux {

/// Which half of cell k a quarter-point production belongs to.
enum class Side { left, right };

/// Half-cell state u_k + 2 lambda (f(u_k) - flux) on the right, u_k + 2 lambda (flux - f(u_k)) on the left.
State half_cell_state(const State& u_k, const Flux& flux, double lambda, Side side, const GasModel& gas);

/// Entropy production rate of the half-cell update at a quarter point:
///   [U(u*) - U(u_k)] / dt + 2 sigma (entropy_flux - F(u_k)) / dx,  sigma = +1 right, -1 left.
/// Fed the dissipative pair (g, G) this is s; fed the conservative pair (h, H) it is p.
/// Throws CflError when the half-cell state is inadmissible.
double half_cell_production(const State& u_k, const Flux& flux, double entropy_flux, double dt,
                            double dx, Side side, const GasModel& gas);

/// Same as half_cell_production, but std::nullopt for an inadmissible half-cell state.
std::optional<double> try_half_cell_production(const State& u_k, const Flux& flux,
                                               double entropy_flux, double dt, double dx,
                                               Side side, const GasModel& gas);

/// Smallest alpha in [0, 1] with alpha s + (1 - alpha) p <= 0. Requires s <= 0.
double alpha_condition_f(double s, double p);

/// Per-interface alpha satisfying the entropy condition for both adjacent cells.
/// g and h must carry entropy fluxes.
std::vector<double> alpha_field_condition_f(const PaddedField& u, const InterfaceFluxes& g,
                                            const InterfaceFluxes& h, double dt, double dx,
                                            const GasModel& gas, Exec exec = Exec::serial);

enum class PositivityFunctional { neg_density, neg_pressure };

/// Value of the convex functional (margin - rho or margin - p). Non-positive
/// means the constraint holds. Pressure of a state with rho <= 0 is +inf.
double positivity_functional(const State& u, PositivityFunctional which, double margin,
                             const GasModel& gas);

/// Ratio bound from the functional values of the high-order and dissipative
/// half-cell states: 0 if c_h <= 0, else c_h / (c_h - c_g), clamped to [0, 1].
/// Throws CflError when c_g > 0.
double positivity_bound(double c_h, double c_g);

/// Lower bound on alpha from one functional on one side of cell k.
double alpha_condition_positivity(const State& u_k, const Flux& g, const Flux& h, double lambda,
                                  Side side, PositivityFunctional which, const GasModel& gas);

/// max over {density, pressure} x {both adjacent cells} of alpha_condition_positivity.
std::vector<double> alpha_field_positivity(const PaddedField& u, std::span<const Flux> g,
                                           std::span<const Flux> h, double lambda,
                                           const GasModel& gas, Exec exec = Exec::serial);

/// Same bound for a single functional (used to check dominance of the combined field).
std::vector<double> alpha_field_positivity(const PaddedField& u, std::span<const Flux> g,
                                           std::span<const Flux> h, double lambda,
                                           PositivityFunctional which, const GasModel& gas,
                                           Exec exec = Exec::serial);

/// 0 below 0, 6x^5 - 15x^4 + 10x^3 on [0, 1], 1 above 1.
double smoothstep(double x);

/// out_i = max_j values_j * kernel[i - j + center]; the window is truncated at
/// the ends unless `periodic`.
std::vector<double> sup_mollify(std::span<const double> values, std::span<const double> kernel,
                                bool periodic = false);

/// Cut hat max(0, min(1, 2x + 2, -2x + 2)) sampled on `width` (odd) points spanning [-1, 1].
double cut_hat(double x);
std::vector<double> cut_hat_kernel(int width);

struct DafermosParams {
  double a{0.1};
  double b{0.4};
  int hat_width{5};
};

/// Per-interface alpha from per-cell entropy rates of the dissipative scheme.
/// With `periodic` the mollifier wraps and interfaces 0 and n share one value.
std::vector<double> dafermos_predictor(std::span<const double> s_field, const DafermosParams& params,
                                       bool periodic = false);

/// Per-cell entropy rate of one forward-Euler LLF step:
///   (G_{k+1/2} - G_{k-1/2}) / dx + (U(u^{n+1}_k) - U(u^n_k)) / dt.
std::vector<double> llf_entropy_rates(const PaddedField& u, double dt, double dx,
                                      const GasModel& gas, Exec exec = Exec::serial);

Limiter condition_f_limiter();
Limiter positivity_limiter();
Limiter dafermos_limiter(const DafermosParams& params = {});

}  // namespace gtflux
