#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gtflux/quadrature.hpp"

namespace gtflux {

/// Everything an alpha strategy may look at for one (sub)step.
struct StepContext {
  const Grid1D& grid;
  const PaddedField& u;     ///< state the fluxes were built from
  const InterfaceFluxes& g; ///< dissipative flux (after its time quadrature)
  const InterfaceFluxes& h; ///< entropy conservative flux (after its time quadrature)
  double dt;
  const GasModel& gas;
  Exec exec;

  double dx() const { return grid.dx(); }
  double lambda() const { return dt / grid.dx(); }
};

/// Blending-parameter strategy. `alpha` returns n+1 values in [0, 1].
struct Limiter {
  std::string name;
  int half_width{1};              ///< cells per side an alpha value depends on
  bool needs_entropy_fluxes{false};
  std::function<std::vector<double>(const StepContext&)> alpha;
};

Limiter constant_limiter(double alpha);

struct SchemeConfig {
  std::string name;
  BaseFlux g_flux{BaseFlux::llf};
  TimeQuadrature g_quad{TimeQuadrature::forward_euler};
  BaseFlux h_flux{BaseFlux::ec2};
  TimeQuadrature h_quad{TimeQuadrature::ssprk22};
  /// Recompute alpha at every Runge-Kutta stage of a uniform SSP scheme
  /// (requires g_quad == h_quad). Otherwise alpha is computed once per step
  /// from the quadrature fluxes.
  bool alpha_per_substage{false};
  Limiter limiter;
};

struct RunConfig {
  SchemeConfig scheme;
  BoundaryKind bc{BoundaryKind::periodic};
  double cfl{0.45};
  double t_end{0.0};
  std::size_t max_steps{10'000'000};
  int max_rejections{20};  ///< halvings of dt allowed when a step raises CflError
  bool record{false};  ///< keep every snapshot and per-interface blend record
  Exec exec{Exec::parallel};
};

/// Per-interface data of one time step. For per-substage schemes g, h and
/// alpha are those of the first stage; `flux` and `entropy_flux` are always
/// the effective one-step values used in the update.
struct InterfaceBlend {
  Flux g;
  Flux h;
  double alpha{0.0};
  Flux flux;
  double G{0.0};
  double H{0.0};
  double entropy_flux{0.0};
};

struct StepRecord {
  double time{0.0};  ///< time at the start of the step
  double dt{0.0};
  std::vector<InterfaceBlend> interfaces;
};

struct Trajectory {
  std::vector<FieldSnapshot> snapshots;  ///< initial + every step if recording, else initial + final
  std::vector<StepRecord> steps;         ///< filled only when recording
  std::size_t step_count{0};
  std::size_t rejected_steps{0};

  const FieldSnapshot& final_state() const { return snapshots.back(); }
};

/// Thrown when the step budget runs out before t_end.
class StepBudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One time step of size dt. `record` (optional) receives the interface data.
FieldSnapshot advance_step(const FieldSnapshot& field, const RunConfig& config, double dt,
                           const GasModel& gas, StepRecord* record = nullptr);

Trajectory advance(const RunConfig& config, const FieldSnapshot& initial, const GasModel& gas);

/// Halo width used by advance_step for the given scheme.
int scheme_ghosts(const SchemeConfig& scheme);

}  // namespace gtflux
