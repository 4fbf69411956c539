#include "gtflux/data_pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "gtflux/quadrature.hpp"

namespace gtflux {

namespace {

std::vector<double> centers(std::size_t n) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
  return x;
}

}  // namespace

double FourierIC::series(int var, double x) const {
  const auto& av = a[static_cast<std::size_t>(var)];
  const auto& bv = b[static_cast<std::size_t>(var)];
  double sum = 0.0;
  for (int k = 1; k <= kModes; ++k) {
    const double arg = 2.0 * std::numbers::pi * k * x;
    sum += av[static_cast<std::size_t>(k - 1)] * std::sin(arg) + bv[static_cast<std::size_t>(k - 1)] * std::cos(arg);
  }
  return sum;
}

Primitive FourierIC::evaluate(double x) const {
  return {series(0, x) + rho_shift, series(1, x) + shift_v, series(2, x) + p_shift};
}

std::vector<State> FourierIC::sample(const Grid1D& grid, const GasModel& gas) const {
  std::vector<State> out(grid.n_cells);
  for (std::size_t k = 0; k < grid.n_cells; ++k) out[k] = to_conserved(evaluate(grid.center(k)), gas);
  return out;
}

FourierIC make_fourier_ic(const std::vector<std::vector<double>>& a_tilde,
                          const std::vector<std::vector<double>>& b_tilde, double amp_rho,
                          double amp_v, double shift_v, double amp_p, std::size_t resolution) {
  if (a_tilde.size() != 3 || b_tilde.size() != 3) throw std::invalid_argument("make_fourier_ic: need 3 rows");
  FourierIC ic;
  ic.amp_rho = amp_rho;
  ic.amp_v = amp_v;
  ic.shift_v = shift_v;
  ic.amp_p = amp_p;
  const double factor[3] = {0.2 + amp_rho, amp_v, 0.3 + amp_p};
  ic.a.assign(3, std::vector<double>(FourierIC::kModes));
  ic.b.assign(3, std::vector<double>(FourierIC::kModes));
  for (int v = 0; v < 3; ++v) {
    if (a_tilde[static_cast<std::size_t>(v)].size() != FourierIC::kModes ||
        b_tilde[static_cast<std::size_t>(v)].size() != FourierIC::kModes)
      throw std::invalid_argument("make_fourier_ic: need kModes coefficients per variable");
    for (int k = 1; k <= FourierIC::kModes; ++k) {
      const double scale = factor[v] / std::pow(static_cast<double>(k), FourierIC::kDecay);
      const auto kk = static_cast<std::size_t>(k - 1);
      ic.a[static_cast<std::size_t>(v)][kk] = a_tilde[static_cast<std::size_t>(v)][kk] * scale;
      ic.b[static_cast<std::size_t>(v)][kk] = b_tilde[static_cast<std::size_t>(v)][kk] * scale;
    }
  }
  double min_rho = 0.0, min_p = 0.0;
  for (double x : centers(resolution)) {
    min_rho = std::min(min_rho, ic.series(0, x));
    min_p = std::min(min_p, ic.series(2, x));
  }
  // Zero-mean sums always have a negative minimum unless identically zero, so
  // the shift by itself would put a vacuum point into every draw.
  const bool flat_rho = min_rho == 0.0, flat_p = min_p == 0.0;
  ic.rho_shift = -min_rho + (flat_rho ? 0.0 : FourierIC::kFloor);
  ic.p_shift = -min_p + (flat_p ? 0.0 : FourierIC::kFloor);
  return ic;
}

FourierIC random_initial_condition(std::uint64_t seed, std::size_t resolution, int max_retries) {
  const GasModel gas{1.4};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    std::vector<std::vector<double>> at(3, std::vector<double>(FourierIC::kModes));
    std::vector<std::vector<double>> bt(3, std::vector<double>(FourierIC::kModes));
    for (int v = 0; v < 3; ++v)
      for (int k = 0; k < FourierIC::kModes; ++k) {
        at[static_cast<std::size_t>(v)][static_cast<std::size_t>(k)] = unit(rng);
        bt[static_cast<std::size_t>(v)][static_cast<std::size_t>(k)] = unit(rng);
      }
    const double amp_rho = 2.0 * unit(rng);
    const double amp_v = 2.0 * unit(rng);
    const double shift_v = -2.0 + 4.0 * unit(rng);
    const double amp_p = 4.0 * unit(rng);
    FourierIC ic = make_fourier_ic(at, bt, amp_rho, amp_v, shift_v, amp_p, resolution);
    const auto states = ic.sample(Grid1D(resolution, 0.0, 1.0), gas);
    if (first_inadmissible(states, gas) < 0) return ic;
  }
  throw std::runtime_error("random_initial_condition: no admissible draw");
}

double minmod(double a, double b) {
  if (a * b <= 0.0) return 0.0;
  return a > 0.0 ? std::min(a, b) : std::max(a, b);
}

std::vector<Flux> muscl_interface_fluxes(const PaddedField& u, const GasModel& gas, Exec exec) {
  if (u.ghosts() < 2) throw std::invalid_argument("muscl_interface_fluxes: need 2 ghosts");
  const long n = static_cast<long>(u.n_cells());
  // Primitives of cells -2 .. n+1, slopes of cells -1 .. n.
  std::vector<Primitive> w(static_cast<std::size_t>(n + 4));
  for_each_index(exec, n + 4, [&](std::ptrdiff_t j) { w[static_cast<std::size_t>(j)] = to_primitive(u.cell(j - 2), gas); });
  std::vector<Primitive> slope(static_cast<std::size_t>(n + 2));
  for_each_index(exec, n + 2, [&](std::ptrdiff_t j) {
    const auto& l = w[static_cast<std::size_t>(j)];
    const auto& c = w[static_cast<std::size_t>(j + 1)];
    const auto& r = w[static_cast<std::size_t>(j + 2)];
    slope[static_cast<std::size_t>(j)] = {minmod(c.rho - l.rho, r.rho - c.rho), minmod(c.v - l.v, r.v - c.v),
                                          minmod(c.p - l.p, r.p - c.p)};
  });
  std::vector<Flux> flux(static_cast<std::size_t>(n + 1));
  for_each_index(exec, n + 1, [&](std::ptrdiff_t i) {
    // Cell i-1 sits at w[i+1] and slope[i]; cell i at w[i+2] and slope[i+1].
    const auto& wl = w[static_cast<std::size_t>(i + 1)];
    const auto& sl = slope[static_cast<std::size_t>(i)];
    const auto& wr = w[static_cast<std::size_t>(i + 2)];
    const auto& sr = slope[static_cast<std::size_t>(i + 1)];
    const State left = to_conserved({wl.rho + 0.5 * sl.rho, wl.v + 0.5 * sl.v, wl.p + 0.5 * sl.p}, gas);
    const State right = to_conserved({wr.rho - 0.5 * sr.rho, wr.v - 0.5 * sr.v, wr.p - 0.5 * sr.p}, gas);
    flux[static_cast<std::size_t>(i)] = llf_flux(left, right, gas);
  });
  return flux;
}

FieldSnapshot muscl_step(const FieldSnapshot& field, double dt, BoundaryKind bc, const GasModel& gas,
                         Exec exec, std::vector<Flux>* effective) {
  const double lambda = dt / field.grid.dx();
  const PaddedField u(field.states, 2, bc);
  const auto f0 = muscl_interface_fluxes(u, gas, exec);
  const PaddedField u1 = forward_euler_stage(u, f0, lambda, gas, exec);
  const auto f1 = muscl_interface_fluxes(u1, gas, exec);
  PaddedField e1 = u1;
  const long n = static_cast<long>(u.n_cells());
  for_each_index(exec, n, [&](std::ptrdiff_t k) {
    e1.cell(k) = u1.cell(k) - lambda * (f1[static_cast<std::size_t>(k + 1)] - f1[static_cast<std::size_t>(k)]);
  });
  const PaddedField u2 = combine_stages(0.75, u, 0.25, e1, gas, exec);
  const auto f2 = muscl_interface_fluxes(u2, gas, exec);
  std::vector<Flux> f(f0.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = (1.0 / 6.0) * f0[i] + (1.0 / 6.0) * f1[i] + (2.0 / 3.0) * f2[i];
  FieldSnapshot next = conservative_step(field, f, dt, gas);
  if (effective) *effective = std::move(f);
  return next;
}

ReferenceTrajectory muscl_reference_solve(const FieldSnapshot& initial, const GasModel& gas,
                                          const ReferenceOptions& options) {
  if (options.trace_stride < 1) throw std::invalid_argument("muscl_reference_solve: trace_stride must be >= 1");
  if (const long bad = first_inadmissible(initial.states, gas); bad >= 0)
    throw PositivityError("initial condition inadmissible", bad);
  std::vector<double> samples = options.sample_times;
  std::sort(samples.begin(), samples.end());
  for (double t : samples)
    if (t < initial.time || t > options.t_end) throw std::invalid_argument("sample time outside the run");

  ReferenceTrajectory traj;
  traj.grid = initial.grid;
  traj.bc = options.bc;
  traj.trace_stride = options.trace_stride;
  const auto stride = static_cast<std::size_t>(options.trace_stride);

  FieldSnapshot current = initial;
  std::size_t next_sample = 0;
  double trace_until = -1.0;
  auto take_samples = [&] {
    while (next_sample < samples.size() && samples[next_sample] <= current.time) {
      traj.samples.push_back(current);
      traj.samples.back().time = samples[next_sample];
      if (options.trace_after_sample)
        trace_until = std::max(trace_until, current.time + options.trace_after_sample(current));
      ++next_sample;
    }
  };
  take_samples();

  std::vector<Flux> eff;
  while (current.time < std::max(options.t_end, trace_until)) {
    if (traj.step_count >= options.max_steps) throw std::runtime_error("muscl_reference_solve: step budget exhausted");
    const double target = next_sample < samples.size() ? samples[next_sample] : std::max(options.t_end, trace_until);
    double dt = compute_dt(current, options.cfl, gas);
    const bool hit = current.time + dt >= target;
    if (hit) dt = target - current.time;
    const bool traced = options.trace_all || current.time < trace_until;
    FieldSnapshot next = muscl_step(current, dt, options.bc, gas, options.exec, traced ? &eff : nullptr);
    next.time = hit ? target : current.time + dt;
    if (traced) {
      TraceStep ts{current.time, next.time, {}};
      for (std::size_t i = 0; i < eff.size(); i += stride) ts.flux.push_back(eff[i]);
      traj.trace.push_back(std::move(ts));
    }
    ++traj.step_count;
    current = std::move(next);
    take_samples();
  }
  traj.final_state = current;
  return traj;
}

FieldSnapshot project_to_coarse(const FieldSnapshot& fine, std::size_t ratio) {
  if (ratio == 0 || fine.states.size() % ratio != 0)
    throw std::invalid_argument("project_to_coarse: cell count not divisible by ratio");
  const std::size_t n = fine.states.size() / ratio;
  FieldSnapshot out{Grid1D(n, fine.grid.x_min, fine.grid.x_max), fine.time, std::vector<State>(n)};
  for (std::size_t k = 0; k < n; ++k) {
    State s{};
    for (std::size_t j = 0; j < ratio; ++j) s += fine.states[k * ratio + j];
    out.states[k] = (1.0 / static_cast<double>(ratio)) * s;
  }
  return out;
}

Flux precise_interface_flux(const ReferenceTrajectory& traj, std::size_t index, double t0, double t1) {
  if (!(t1 > t0)) throw std::invalid_argument("precise_interface_flux: degenerate interval");
  Flux sum{};
  double covered = 0.0;
  for (const auto& step : traj.trace) {
    const double overlap = std::min(step.t1, t1) - std::max(step.t0, t0);
    if (overlap <= 0.0) continue;
    if (index >= step.flux.size()) throw std::invalid_argument("precise_interface_flux: interface not traced");
    sum += overlap * step.flux[index];
    covered += overlap;
  }
  if (std::abs(covered - (t1 - t0)) > 1e-12 * std::max(1.0, std::abs(t1)))
    throw std::invalid_argument("precise_interface_flux: interval not covered by the trace");
  return (1.0 / (t1 - t0)) * sum;
}

double alpha_target(const Flux& f_precise, const Flux& g, const Flux& h) {
  const Vec3 a = h - g;
  const Vec3 b = f_precise - g;
  const double aa = dot(a, a);
  if (std::sqrt(aa) <= 1e-12 * (1.0 + norm2(g))) return 1.0;
  const double beta = std::clamp(dot(a, b) / aa, 0.0, 1.0);
  return 1.0 - beta;
}

std::uint64_t ic_seed(std::uint64_t seed, int ic) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(ic)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

Dataset samples_for_ic(const FourierIC& ic, const DatasetOptions& opt, const GasModel& gas,
                       std::size_t* fine_steps, std::size_t* failed) {
  if (opt.n_coarse == 0 || opt.n_fine % opt.n_coarse != 0)
    throw std::invalid_argument("samples_for_ic: fine cells must be a multiple of coarse cells");
  if (opt.n_samples < 1) throw std::invalid_argument("samples_for_ic: need at least one sample time");
  const std::size_t ratio = opt.n_fine / opt.n_coarse;
  const Grid1D fine(opt.n_fine, 0.0, 1.0);
  const FieldSnapshot initial{fine, 0.0, ic.sample(fine, gas)};

  ReferenceOptions ro;
  ro.t_end = opt.t_end;
  ro.cfl = opt.cfl;
  ro.exec = opt.exec;
  ro.trace_stride = static_cast<int>(ratio);
  for (int s = 0; s < opt.n_samples; ++s) ro.sample_times.push_back(opt.t_end * s / opt.n_samples);
  ro.trace_after_sample = [&](const FieldSnapshot& snap) {
    return compute_dt(project_to_coarse(snap, ratio), opt.cfl, gas);
  };
  const ReferenceTrajectory traj = muscl_reference_solve(initial, gas, ro);
  if (fine_steps) *fine_steps = traj.step_count;

  Dataset data;
  const long n = static_cast<long>(opt.n_coarse);
  for (const auto& snap : traj.samples) {
    const FieldSnapshot coarse = project_to_coarse(snap, ratio);
    const double dt = compute_dt(coarse, opt.cfl, gas);
    const double lambda = dt / coarse.grid.dx();
    const InterfaceFluxes g =
        rk_quadrature_flux(BaseFlux::llf, TimeQuadrature::ssprk22, coarse, BoundaryKind::periodic, lambda, gas, opt.exec);
    InterfaceFluxes h;
    bool h_ok = true;
    try {
      h = rk_quadrature_flux(BaseFlux::ec4, TimeQuadrature::ssprk33, coarse, BoundaryKind::periodic, lambda, gas, opt.exec);
    } catch (const PositivityError&) {
      h_ok = false;
      if (failed) ++*failed;
    }
    const PaddedField u(coarse.states, kNnCellsPerSide, BoundaryKind::periodic);
    for (long i = 0; i < n; ++i) {
      const auto idx = static_cast<std::size_t>(i);
      double target = 1.0;
      if (h_ok) {
        const Flux f = precise_interface_flux(traj, idx, snap.time, snap.time + dt);
        target = alpha_target(f, g.flux[idx], h.flux[idx]);
      }
      data.add(nn_input_window(u, i, gas), target);
    }
  }
  return data;
}

DatasetBuild build_dataset(const DatasetOptions& options, const GasModel& gas, const IcCallback& on_ic) {
  if (options.n_ics < 1) throw std::invalid_argument("build_dataset: need at least one initial condition");
  DatasetBuild out;
  out.manifest.options = options;
  for (int i = 0; i < options.n_ics; ++i) out.manifest.ic_seeds.push_back(ic_seed(options.seed, i));

  std::vector<Dataset> parts(static_cast<std::size_t>(options.n_ics));
  std::vector<std::size_t> steps(parts.size(), 0), failed(parts.size(), 0);
  DatasetOptions inner = options;
  inner.exec = Exec::serial;
  for_each_index(options.exec, options.n_ics, [&](std::ptrdiff_t i) {
    const auto idx = static_cast<std::size_t>(i);
    const FourierIC ic = random_initial_condition(out.manifest.ic_seeds[idx], options.n_fine);
    parts[idx] = samples_for_ic(ic, inner, gas, &steps[idx], &failed[idx]);
    if (on_ic) {
#pragma omp critical(gtflux_dataset_progress)
      on_ic(static_cast<int>(i), steps[idx]);
    }
  });
  for (std::size_t i = 0; i < parts.size(); ++i) {
    out.data.inputs.insert(out.data.inputs.end(), parts[i].inputs.begin(), parts[i].inputs.end());
    out.data.targets.insert(out.data.targets.end(), parts[i].targets.begin(), parts[i].targets.end());
    out.manifest.fine_steps += steps[i];
    out.manifest.failed_high_order += failed[i];
  }
  out.manifest.samples = out.data.size();
  return out;
}

std::string DatasetManifest::to_json() const {
  nlohmann::json j;
  j["seed"] = options.seed;
  j["ic_seeds"] = ic_seeds;
  j["n_ics"] = options.n_ics;
  j["domain"] = {0.0, 1.0};
  j["boundary"] = "periodic";
  j["fine_cells"] = options.n_fine;
  j["coarse_cells"] = options.n_coarse;
  j["sample_times"] = options.n_samples;
  j["t_end"] = options.t_end;
  j["cfl"] = options.cfl;
  j["gamma"] = 1.4;
  j["reference"] = "MUSCL minmod(primitive) + LLF, SSPRK(3,3)";
  j["g"] = "llf/ssprk22";
  j["h"] = "ec4/ssprk33";
  j["samples"] = samples;
  j["fine_steps"] = fine_steps;
  j["failed_high_order"] = failed_high_order;
  j["columns"] = dataset_header();
  return j.dump(2);
}

std::vector<std::string> dataset_header() {
  std::vector<std::string> h;
  for (int c = -kNnCellsPerSide; c < kNnCellsPerSide; ++c) {
    const std::string tag = c < 0 ? "m" + std::to_string(-c) : "p" + std::to_string(c);
    for (const char* q : {"rho", "mom", "E", "p"}) h.push_back(std::string(q) + "_" + tag);
  }
  h.push_back("alpha");
  return h;
}

void write_dataset_csv(const Dataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::ios_base::failure("cannot write " + path);
  const auto header = dataset_header();
  if (data.n_inputs + 1 != header.size()) throw std::invalid_argument("write_dataset_csv: dataset width must be 40");
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  char buf[32];
  for (std::size_t r = 0; r < data.size(); ++r) {
    for (double v : data.row(r)) {
      std::snprintf(buf, sizeof buf, "%.17g,", v);
      out << buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g", data.targets[r]);
    out << buf << '\n';
  }
  if (!out) throw std::ios_base::failure("write failed: " + path);
}

Dataset read_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot read " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument(path + ": empty file");
  const std::size_t cols = static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
  if (cols < 2) throw std::invalid_argument(path + ": need inputs and a target column");
  Dataset d;
  d.n_inputs = cols - 1;
  std::vector<double> row(cols);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const char* p = line.c_str();
    for (std::size_t c = 0; c < cols; ++c) {
      char* end = nullptr;
      row[c] = std::strtod(p, &end);
      if (end == p) throw std::invalid_argument(path + ": bad number on line " + std::to_string(line_no));
      p = end;
      if (c + 1 < cols) {
        if (*p != ',') throw std::invalid_argument(path + ": wrong column count on line " + std::to_string(line_no));
        ++p;
      }
    }
    d.add(std::span<const double>(row.data(), cols - 1), row.back());
  }
  return d;
}

}  // namespace gtflux
