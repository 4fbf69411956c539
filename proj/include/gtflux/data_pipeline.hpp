#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gtflux/mesh.hpp"
#include "gtflux/mlp.hpp"

namespace gtflux {

/// Random periodic initial data on [0, 1] built from 100 Fourier modes per
/// primitive variable with coefficients decaying like k^-2.
struct FourierIC {
  static constexpr int kModes = 100;
  static constexpr double kDecay = 2.0;
  /// Added after the positivity shift, which alone leaves min rho = 0.
  static constexpr double kFloor = 0.1;

  // a[v][k], b[v][k] for v in (rho, v, p), already scaled.
  std::vector<std::vector<double>> a;
  std::vector<std::vector<double>> b;
  double amp_rho{0.0}, amp_v{0.0}, shift_v{0.0}, amp_p{0.0};
  double rho_shift{0.0};  ///< -min(0, min rho~) + floor
  double p_shift{0.0};    ///< -min(0, min p~) + floor

  /// Raw Fourier sum of variable `var` (0 rho, 1 v, 2 p), amplitude applied.
  double series(int var, double x) const;
  Primitive evaluate(double x) const;
  /// Cell-center samples converted to conserved states.
  std::vector<State> sample(const Grid1D& grid, const GasModel& gas) const;
};

/// Draws a FourierIC; positivity shifts are computed on `resolution` points.
/// Throws std::runtime_error if no admissible draw is found within `max_retries`.
FourierIC random_initial_condition(std::uint64_t seed, std::size_t resolution = 4000,
                                   int max_retries = 16);

/// Builds the IC from explicit unscaled coefficients in [0, 1] (3 x kModes each).
FourierIC make_fourier_ic(const std::vector<std::vector<double>>& a_tilde,
                          const std::vector<std::vector<double>>& b_tilde, double amp_rho,
                          double amp_v, double shift_v, double amp_p, std::size_t resolution = 4000);

/// Minmod of two slopes.
double minmod(double a, double b);

/// MUSCL interface fluxes: minmod-limited linear reconstruction of (rho, v, p),
/// LLF on the reconstructed traces. `u` needs at least 2 ghosts.
std::vector<Flux> muscl_interface_fluxes(const PaddedField& u, const GasModel& gas, Exec exec);

/// Flux through a set of interfaces during one fine step.
struct TraceStep {
  double t0{0.0};
  double t1{0.0};
  std::vector<Flux> flux;  ///< stage-weighted SSPRK(3,3) flux, every `stride`-th interface
};

struct ReferenceTrajectory {
  Grid1D grid;
  BoundaryKind bc{BoundaryKind::periodic};
  std::vector<FieldSnapshot> samples;  ///< states at the requested sample times
  FieldSnapshot final_state;
  int trace_stride{1};
  std::vector<TraceStep> trace;
  std::size_t step_count{0};
};

struct ReferenceOptions {
  double t_end{1.0};
  double cfl{0.45};
  BoundaryKind bc{BoundaryKind::periodic};
  std::vector<double> sample_times;  ///< hit exactly and stored
  int trace_stride{1};               ///< record interfaces 0, stride, 2 stride, ...
  bool trace_all{false};
  /// Called at each sample time; fine steps in [t, t + returned duration] are traced.
  std::function<double(const FieldSnapshot&)> trace_after_sample;
  std::size_t max_steps{50'000'000};
  Exec exec{Exec::parallel};
};

/// SSPRK(3,3) MUSCL solve. Throws PositivityError on loss of admissibility.
ReferenceTrajectory muscl_reference_solve(const FieldSnapshot& initial, const GasModel& gas,
                                          const ReferenceOptions& options);

/// One SSPRK(3,3) MUSCL step; `effective` (optional) receives the stage-weighted interface fluxes.
FieldSnapshot muscl_step(const FieldSnapshot& field, double dt, BoundaryKind bc, const GasModel& gas,
                         Exec exec, std::vector<Flux>* effective = nullptr);

/// Block means of `ratio` consecutive cells.
FieldSnapshot project_to_coarse(const FieldSnapshot& fine, std::size_t ratio);

/// Time average over [t0, t1] of the traced flux at stored interface `index`,
/// each fine step contributing its stage-weighted flux for its overlap.
Flux precise_interface_flux(const ReferenceTrajectory& traj, std::size_t index, double t0, double t1);

/// Least-squares alpha: beta = clamp(A.b / A.A), A = h - g, b = f - g; alpha = 1 - beta,
/// and alpha = 1 when |A| <= 1e-12 (1 + |g|).
double alpha_target(const Flux& f_precise, const Flux& g, const Flux& h);

struct DatasetOptions {
  int n_ics{32};
  std::size_t n_fine{4000};
  std::size_t n_coarse{100};
  int n_samples{100};
  double t_end{1.0};
  double cfl{0.45};
  std::uint64_t seed{1};
  Exec exec{Exec::parallel};
};

struct DatasetManifest {
  DatasetOptions options;
  std::vector<std::uint64_t> ic_seeds;
  std::size_t samples{0};
  std::size_t fine_steps{0};
  std::size_t failed_high_order{0};  ///< sample times where the h quadrature lost admissibility
  std::string to_json() const;
};

struct DatasetBuild {
  Dataset data;
  DatasetManifest manifest;
};

using IcCallback = std::function<void(int ic, std::size_t fine_steps)>;

/// Seed of initial condition `ic` of a dataset with master seed `seed`.
std::uint64_t ic_seed(std::uint64_t seed, int ic);

/// Samples of one initial condition: for every sample time and coarse
/// interface, the 40-value window and the alpha target.
Dataset samples_for_ic(const FourierIC& ic, const DatasetOptions& options, const GasModel& gas,
                       std::size_t* fine_steps = nullptr, std::size_t* failed = nullptr);

DatasetBuild build_dataset(const DatasetOptions& options, const GasModel& gas,
                           const IcCallback& on_ic = {});

std::vector<std::string> dataset_header();
void write_dataset_csv(const Dataset& data, const std::string& path);
Dataset read_dataset_csv(const std::string& path);

}  // namespace gtflux
