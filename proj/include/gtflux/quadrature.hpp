#pragma once

#include <span>
#include <vector>

#include "gtflux/fluxes.hpp"
#include "gtflux/mesh.hpp"
#include "gtflux/parallel.hpp"

namespace gtflux {

/// Time quadrature used to turn a semidiscrete flux into a one-step flux.
enum class TimeQuadrature { forward_euler, ssprk22, ssprk33 };

const char* to_string(TimeQuadrature q);

/// Stage weights b_i such that u^{n+1} = u^n - lambda * sum_i b_i (F^i_{k+1/2} - F^i_{k-1/2}).
std::span<const double> quadrature_weights(TimeQuadrature q);

/// Per-interface fluxes (n + 1 entries, entry i between cells i-1 and i) and,
/// optionally, the matching numerical entropy fluxes.
struct InterfaceFluxes {
  std::vector<Flux> flux;
  std::vector<double> entropy;
};

/// Evaluates `kind` at every interface of a padded field.
InterfaceFluxes interface_fluxes(BaseFlux kind, const PaddedField& u, const GasModel& gas,
                                 Exec exec, bool with_entropy = false);

/// v - lambda * (F_{k+1/2} - F_{k-1/2}) with the halo refilled.
/// Throws PositivityError naming the first inadmissible cell.
PaddedField forward_euler_stage(const PaddedField& v, std::span<const Flux> fluxes, double lambda,
                                const GasModel& gas, Exec exec);

/// a * x + b * y cellwise (interior), halo refilled. Throws PositivityError when a cell is inadmissible.
PaddedField combine_stages(double a, const PaddedField& x, double b, const PaddedField& y,
                           const GasModel& gas, Exec exec);

/// One-step flux of the SSP Runge-Kutta scheme applied to the semidiscrete
/// scheme of `kind`. For forward Euler this is the base flux itself; for
/// ssprk22 it is (f(u) + f(u1)) / 2 with the forward-Euler predictor u1; for
/// ssprk33 it is f0/6 + f1/6 + 2 f2/3 at the SSPRK(3,3) stage states. The
/// entropy fluxes (when requested) are combined with the same weights.
InterfaceFluxes rk_quadrature_flux(BaseFlux kind, TimeQuadrature scheme, const PaddedField& u,
                                   double lambda, const GasModel& gas, Exec exec,
                                   bool with_entropy = false);

InterfaceFluxes rk_quadrature_flux(BaseFlux kind, TimeQuadrature scheme, const FieldSnapshot& field,
                                   BoundaryKind bc, double lambda, const GasModel& gas,
                                   Exec exec = Exec::serial, bool with_entropy = false);

/// Halo width needed by quadrature of `kind` when ghosts are refilled every stage.
int required_ghosts(BaseFlux kind);

}  // namespace gtflux
