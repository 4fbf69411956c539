#pragma once

#include <span>

#include "gtflux/euler.hpp"

namespace gtflux {

/// Two-point and 2p-point numerical fluxes of the 1D Euler system.
enum class BaseFlux { llf, ec2, ec4 };

/// Number of cells on each side of an interface the flux reads.
constexpr int stencil_half_width(BaseFlux kind) { return kind == BaseFlux::ec4 ? 2 : 1; }

const char* to_string(BaseFlux kind);

/// Local Lax-Friedrichs (Rusanov) flux.
Flux llf_flux(const State& ul, const State& ur, const GasModel& gas);

/// Entropy conservative two-point flux (logarithmic-mean form of Chandrashekar).
/// Satisfies (w_r - w_l) . h = psi_r - psi_l for the pair U = -rho S.
Flux ec_flux2(const State& ul, const State& ur, const GasModel& gas);

/// Fourth-order entropy conservative flux on the window (u_{k-1}, u_k, u_{k+1}, u_{k+2}).
Flux ec_flux4(std::span<const State, 4> window, const GasModel& gas);

/// Convex blend alpha * g + (1 - alpha) * h. Throws std::invalid_argument for alpha outside [0, 1].
Flux gt_flux(double alpha, const Flux& g, const Flux& h);

double llf_entropy_flux(const State& ul, const State& ur, const GasModel& gas);
double ec2_entropy_flux(const State& ul, const State& ur, const GasModel& gas);
double ec4_entropy_flux(std::span<const State, 4> window, const GasModel& gas);

/// Numerical flux of the given kind at the interface in the middle of `window`.
/// The window holds 2 * stencil_half_width(kind) states.
Flux numerical_flux(BaseFlux kind, std::span<const State> window, const GasModel& gas);

/// Consistent numerical entropy flux paired with `numerical_flux`.
double numerical_entropy_flux(BaseFlux kind, std::span<const State> window, const GasModel& gas);

/// Logarithmic mean (a - b) / (ln a - ln b), stable as a -> b.
double log_mean(double a, double b);

}  // namespace gtflux
