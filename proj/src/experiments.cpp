#include "gtflux/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "gtflux/data_pipeline.hpp"

namespace gtflux {

Primitive shu_osher_ic(double x) {
  if (x < 1.0) return {3.857153, 2.629, 10.333};
  return {1.0 + kShuOsherEps * std::sin(5.0 * x), 0.0, 1.0};
}

Primitive smooth_transport_ic(double x) { return {3.857153 + kTransportEps * std::sin(2.0 * x), 2.0, 10.33333}; }

State smooth_transport_average(double a, double b, double t, const GasModel& gas) {
  const double shift = 2.0 * t;
  const double rho = 3.857153 + kTransportEps * (std::cos(2.0 * (a - shift)) - std::cos(2.0 * (b - shift))) /
                                    (2.0 * (b - a));
  const double v = 2.0, p = 10.33333;
  return {rho, rho * v, p / (gas.gamma - 1.0) + 0.5 * rho * v * v};
}

TestCase parse_test_case(const std::string& name) {
  if (name == "shu-osher") return TestCase::shu_osher;
  if (name == "smooth" || name == "smooth-transport") return TestCase::smooth_transport;
  throw std::invalid_argument("unknown test case: " + name);
}

const char* to_string(TestCase tc) { return tc == TestCase::shu_osher ? "shu-osher" : "smooth-transport"; }

TestCaseSetup default_setup(TestCase tc, std::size_t cells) {
  if (tc == TestCase::shu_osher) return {Grid1D(cells, 0.0, 10.0), BoundaryKind::extrapolation, 1.8};
  return {Grid1D(cells, 0.0, std::numbers::pi), BoundaryKind::periodic, std::numbers::pi / 2.0};
}

FieldSnapshot smooth_transport_exact(const Grid1D& grid, double t, const GasModel& gas) {
  FieldSnapshot f{grid, t, std::vector<State>(grid.n_cells)};
  for (std::size_t k = 0; k < grid.n_cells; ++k)
    f.states[k] = smooth_transport_average(grid.interface_position(k), grid.interface_position(k + 1), t, gas);
  return f;
}

FieldSnapshot initial_field(TestCase tc, const Grid1D& grid, const GasModel& gas) {
  if (tc == TestCase::smooth_transport) return smooth_transport_exact(grid, 0.0, gas);
  FieldSnapshot f{grid, 0.0, std::vector<State>(grid.n_cells)};
  for (std::size_t k = 0; k < grid.n_cells; ++k) f.states[k] = to_conserved(shu_osher_ic(grid.center(k)), gas);
  return f;
}

std::vector<std::string> preset_names() { return {"delft", "pplft", "ddlft", "palft", "dafermos", "llf"}; }

SchemeConfig make_preset(const std::string& name, const MlpModel* weights) {
  SchemeConfig s;
  s.name = name;
  if (name == "delft") {
    s.g_flux = BaseFlux::llf;
    s.g_quad = TimeQuadrature::forward_euler;
    s.h_flux = BaseFlux::ec2;
    s.h_quad = TimeQuadrature::ssprk22;
    s.limiter = condition_f_limiter();
    return s;
  }
  if (name == "pplft") {
    s.g_flux = BaseFlux::llf;
    s.g_quad = TimeQuadrature::ssprk33;
    s.h_flux = BaseFlux::ec4;
    s.h_quad = TimeQuadrature::ssprk33;
    s.alpha_per_substage = true;
    s.limiter = positivity_limiter();
    return s;
  }
  if (name == "llf") {
    s.g_flux = BaseFlux::llf;
    s.g_quad = TimeQuadrature::forward_euler;
    s.h_flux = BaseFlux::llf;
    s.h_quad = TimeQuadrature::forward_euler;
    s.limiter = constant_limiter(1.0);
    return s;
  }
  s.g_flux = BaseFlux::llf;
  s.g_quad = TimeQuadrature::ssprk22;
  s.h_flux = BaseFlux::ec4;
  s.h_quad = TimeQuadrature::ssprk33;
  if (name == "ddlft") {
    if (!weights) throw std::invalid_argument("ddlft needs network weights");
    s.limiter = neural_limiter(*weights);
  } else if (name == "palft") {
    s.limiter = pa_limiter();
  } else if (name == "dafermos") {
    s.limiter = dafermos_limiter();
  } else {
    throw std::invalid_argument("unknown scheme: " + name);
  }
  return s;
}

std::vector<State> downscale(const std::vector<State>& fine) {
  if (fine.size() % 2 != 0) throw std::invalid_argument("downscale: odd length");
  std::vector<State> out(fine.size() / 2);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = 0.5 * (fine[2 * k] + fine[2 * k + 1]);
  return out;
}

L1Error l1_error(const std::vector<State>& solution, const std::vector<State>& reference, double dx) {
  if (solution.empty()) throw std::invalid_argument("l1_error: empty solution");
  std::vector<State> ref = reference;
  while (ref.size() > solution.size()) ref = downscale(ref);
  if (ref.size() != solution.size())
    throw std::invalid_argument("l1_error: reference length is not solution length times a power of two");
  L1Error e;
  for (std::size_t k = 0; k < ref.size(); ++k) {
    const State d = solution[k] - ref[k];
    e.density += std::abs(d.rho);
    e.total += std::abs(d.rho) + std::abs(d.mom) + std::abs(d.energy);
  }
  e.density *= dx;
  e.total *= dx;
  return e;
}

std::vector<double> eoc(const std::vector<double>& errors, const std::vector<std::size_t>& cells) {
  if (errors.size() != cells.size() || errors.size() < 2) throw std::invalid_argument("eoc: need >= 2 matching levels");
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
    if (!(errors[i] > 0.0 && errors[i + 1] > 0.0)) throw std::invalid_argument("eoc: errors must be positive");
    out.push_back(std::log(errors[i] / errors[i + 1]) /
                  std::log(static_cast<double>(cells[i + 1]) / static_cast<double>(cells[i])));
  }
  return out;
}

double eoc_fit(const std::vector<double>& errors, const std::vector<std::size_t>& cells) {
  if (errors.size() != cells.size() || errors.size() < 2) throw std::invalid_argument("eoc_fit: need >= 2 levels");
  return std::log(errors.front() / errors.back()) /
         std::log(static_cast<double>(cells.back()) / static_cast<double>(cells.front()));
}

double total_variation(const std::vector<double>& values) {
  double tv = 0.0;
  for (std::size_t i = 1; i < values.size(); ++i) tv += std::abs(values[i] - values[i - 1]);
  return tv;
}

std::vector<double> density_of(const std::vector<State>& states) {
  std::vector<double> r(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) r[i] = states[i].rho;
  return r;
}

std::size_t EntropyReport::above(double tolerance) const {
  std::size_t n = 0;
  for (const auto& row : production)
    for (double p : row)
      if (p > tolerance) ++n;
  return n;
}

EntropyReport entropy_production_report(const Trajectory& traj, const GasModel& gas) {
  if (traj.steps.size() + 1 != traj.snapshots.size())
    throw std::invalid_argument("entropy_production_report: trajectory was not recorded");
  EntropyReport rep;
  rep.max_production = -std::numeric_limits<double>::infinity();
  for (const auto& snap : traj.snapshots)
    for (const auto& s : snap.states) rep.scale = std::max(rep.scale, std::abs(entropy_pair(s, gas).U));
  for (std::size_t n = 0; n < traj.steps.size(); ++n) {
    const auto& before = traj.snapshots[n];
    const auto& after = traj.snapshots[n + 1];
    const auto& rec = traj.steps[n];
    const double dx = before.grid.dx();
    std::vector<double> row(before.states.size());
    for (std::size_t k = 0; k < row.size(); ++k) {
      row[k] = (entropy_pair(after.states[k], gas).U - entropy_pair(before.states[k], gas).U) / rec.dt +
               (rec.interfaces[k + 1].entropy_flux - rec.interfaces[k].entropy_flux) / dx;
      rep.max_production = std::max(rep.max_production, row[k]);
    }
    rep.entries += row.size();
    rep.production.push_back(std::move(row));
  }
  if (rep.entries == 0) rep.max_production = 0.0;
  return rep;
}

RunReport run_case(const SchemeConfig& scheme, TestCase tc, std::size_t cells, const GasModel& gas,
                   std::optional<double> t_end, double cfl, bool record, Exec exec) {
  const TestCaseSetup setup = default_setup(tc, cells);
  RunConfig cfg;
  cfg.scheme = scheme;
  cfg.bc = setup.bc;
  cfg.cfl = cfl;
  cfg.t_end = t_end.value_or(setup.t_end);
  cfg.record = record;
  cfg.exec = exec;
  const auto start = std::chrono::steady_clock::now();
  RunReport rep;
  rep.trajectory = advance(cfg, initial_field(tc, setup.grid, gas), gas);
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

std::vector<ConvergenceRow> convergence_study(const SchemeConfig& scheme, const std::vector<int>& levels,
                                              const GasModel& gas, double cfl, int ref_level, Exec exec) {
  if (levels.empty()) throw std::invalid_argument("convergence_study: no levels");
  const TestCaseSetup ref_setup = default_setup(TestCase::smooth_transport, std::size_t{1} << ref_level);
  const auto reference = smooth_transport_exact(ref_setup.grid, ref_setup.t_end, gas).states;
  std::vector<ConvergenceRow> rows;
  for (int level : levels) {
    if (level > ref_level) throw std::invalid_argument("convergence_study: level finer than the reference");
    const std::size_t n = std::size_t{1} << level;
    const RunReport rep = run_case(scheme, TestCase::smooth_transport, n, gas, std::nullopt, cfl, false, exec);
    ConvergenceRow row{n, l1_error(rep.trajectory.final_state().states, reference, default_setup(TestCase::smooth_transport, n).grid.dx()), 0.0};
    if (!rows.empty()) row.order = eoc({rows.back().error.density, row.error.density}, {rows.back().cells, n})[0];
    rows.push_back(row);
  }
  return rows;
}

FieldSnapshot shu_osher_reference(std::size_t cells, std::size_t fine_cells, const GasModel& gas, double t_end,
                                  Exec exec) {
  if (fine_cells % cells != 0) throw std::invalid_argument("shu_osher_reference: fine cells must be a multiple");
  const TestCaseSetup setup = default_setup(TestCase::shu_osher, fine_cells);
  ReferenceOptions opt;
  opt.t_end = t_end;
  opt.bc = BoundaryKind::extrapolation;
  opt.exec = exec;
  const auto traj = muscl_reference_solve(initial_field(TestCase::shu_osher, setup.grid, gas), gas, opt);
  return project_to_coarse(traj.final_state, fine_cells / cells);
}

void write_field_csv(const FieldSnapshot& field, const std::vector<double>& alpha, const GasModel& gas,
                     const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::ios_base::failure("cannot write " + path);
  out << "x,rho,v,p,alpha\n";
  out.precision(17);
  for (std::size_t k = 0; k < field.states.size(); ++k) {
    const Primitive w = to_primitive(field.states[k], gas);
    out << field.grid.center(k) << ',' << w.rho << ',' << w.v << ',' << w.p << ','
        << (k < alpha.size() ? alpha[k] : 0.0) << '\n';
  }
  if (!out) throw std::ios_base::failure("write failed: " + path);
}

}  // namespace gtflux
