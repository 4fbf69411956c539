#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gtflux/limiters.hpp"
#include "gtflux/mlp.hpp"
#include "gtflux/pa.hpp"
#include "gtflux/solver.hpp"

namespace gtflux {

inline constexpr double kShuOsherEps = 0.2;
inline constexpr double kTransportEps = 0.2;

Primitive shu_osher_ic(double x);
Primitive smooth_transport_ic(double x);

/// Exact cell average of the transported smooth profile over [a, b] at time t.
State smooth_transport_average(double a, double b, double t, const GasModel& gas);

enum class TestCase { shu_osher, smooth_transport };
TestCase parse_test_case(const std::string& name);
const char* to_string(TestCase tc);

struct TestCaseSetup {
  Grid1D grid;
  BoundaryKind bc;
  double t_end;
};

/// [0, 10] extrapolation, T = 1.8; or [0, pi] periodic, T = pi / 2.
TestCaseSetup default_setup(TestCase tc, std::size_t cells);

/// Shu-Osher: point values at cell centers. Smooth transport: exact averages.
FieldSnapshot initial_field(TestCase tc, const Grid1D& grid, const GasModel& gas);

/// Exact smooth-transport averages at time t.
FieldSnapshot smooth_transport_exact(const Grid1D& grid, double t, const GasModel& gas);

/// Scheme presets: delft, pplft, ddlft, palft, dafermos, and llf (alpha = 1).
/// ddlft needs `weights`.
SchemeConfig make_preset(const std::string& name, const MlpModel* weights = nullptr);
std::vector<std::string> preset_names();

/// Pairwise means; length must be even.
std::vector<State> downscale(const std::vector<State>& fine);

struct L1Error {
  double density{0.0};
  double total{0.0};  ///< sum over the three components
};

/// dx * sum |u - ref| after downscaling `reference` to the solution length.
L1Error l1_error(const std::vector<State>& solution, const std::vector<State>& reference, double dx);

/// order_i = log(e_i / e_{i+1}) / log(N_{i+1} / N_i).
std::vector<double> eoc(const std::vector<double>& errors, const std::vector<std::size_t>& cells);

/// Least-squares-free summary: log(e_first / e_last) / log(N_last / N_first).
double eoc_fit(const std::vector<double>& errors, const std::vector<std::size_t>& cells);

double total_variation(const std::vector<double>& values);
std::vector<double> density_of(const std::vector<State>& states);

struct EntropyReport {
  /// production[step][cell]
  std::vector<std::vector<double>> production;
  double max_production{0.0};
  double scale{0.0};  ///< max |U| over all recorded states
  std::size_t entries{0};
  std::size_t above(double tolerance) const;
};

/// Per-cell entropy production of a recorded run:
///   [U(u^{n+1}) - U(u^n)] / dt + [F(k+1/2) - F(k-1/2)] / dx with the blended entropy flux.
EntropyReport entropy_production_report(const Trajectory& traj, const GasModel& gas);

struct RunReport {
  Trajectory trajectory;
  double wall_seconds{0.0};
};

RunReport run_case(const SchemeConfig& scheme, TestCase tc, std::size_t cells, const GasModel& gas,
                   std::optional<double> t_end = std::nullopt, double cfl = 0.45, bool record = false,
                   Exec exec = Exec::parallel);

struct ConvergenceRow {
  std::size_t cells;
  L1Error error;
  double order{0.0};  ///< density EOC against the previous row
};

/// Smooth transport on 2^level cells for each level, errors against exact averages on 2^ref_level cells.
std::vector<ConvergenceRow> convergence_study(const SchemeConfig& scheme, const std::vector<int>& levels,
                                              const GasModel& gas, double cfl = 0.45, int ref_level = 14,
                                              Exec exec = Exec::parallel);

/// MUSCL reference for Shu-Osher on `fine_cells`, projected to `cells`.
FieldSnapshot shu_osher_reference(std::size_t cells, std::size_t fine_cells, const GasModel& gas,
                                  double t_end = 1.8, Exec exec = Exec::parallel);

/// Shu-Osher CSV: x, rho, v, p, alpha (alpha of the left interface in the last step).
void write_field_csv(const FieldSnapshot& field, const std::vector<double>& alpha, const GasModel& gas,
                     const std::string& path);

}  // namespace gtflux
