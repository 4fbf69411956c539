// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failing criteria unless --report-only is given.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>

#include "gtflux/data_pipeline.hpp"
#include "gtflux/experiments.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace gtflux;

namespace {

const GasModel kGas{1.4};

struct Outcome {
  bool pass{false};
  std::string detail;
};

struct Context {
  std::string weights_path;
  std::optional<MlpModel> weights;
  std::optional<FieldSnapshot> shu_osher_reference;

  const FieldSnapshot& reference() {
    if (!shu_osher_reference) shu_osher_reference = gtflux::shu_osher_reference(400, 4000, kGas);
    return *shu_osher_reference;
  }
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// EOC over the last three levels of a study.
double last_three_eoc(const std::vector<ConvergenceRow>& rows) {
  const auto n = rows.size();
  return eoc_fit({rows[n - 3].error.density, rows[n - 2].error.density, rows[n - 1].error.density},
                 {rows[n - 3].cells, rows[n - 2].cells, rows[n - 1].cells});
}

Outcome criterion_1(Context& ctx) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<int> levels{5, 6, 7, 8, 9, 10};
  const double palft = last_three_eoc(convergence_study(make_preset("palft"), levels, kGas));
  const double delft = last_three_eoc(convergence_study(make_preset("delft"), levels, kGas));
  std::string dd = "ddlft n/a (no weights)";
  bool dd_ok = false;
  if (ctx.weights) {
    const double ddlft = last_three_eoc(convergence_study(make_preset("ddlft", &*ctx.weights), {5, 6, 7, 8, 9}, kGas));
    dd_ok = ddlft >= 2.6;
    dd = fmt("ddlft %.2f (levels 7-9)", ddlft);
  }
  const double secs = seconds_since(t0);
  const bool ok = palft >= 2.6 && dd_ok && delft >= 1.7 && delft <= 2.3 && secs < 300.0;
  return {ok, fmt("palft %.2f, %s, delft %.2f (need >= 2.6, >= 2.6, [1.7, 2.3]); %.0f s", palft, dd.c_str(), delft, secs)};
}

Outcome criterion_2(Context&) {
  const auto run = run_case(make_preset("delft"), TestCase::shu_osher, 400, kGas, std::nullopt, 0.45, true);
  const auto rep = entropy_production_report(run.trajectory, kGas);
  const double ratio = rep.max_production / rep.scale;
  return {ratio <= 1e-10, fmt("max production / max|U| = %.3e over %zu entries (need <= 1e-10)", ratio, rep.entries)};
}

Outcome criterion_3(Context& ctx) {
  std::string detail;
  bool ok = true;
  auto check = [&](const std::string& name, const SchemeConfig& scheme) {
    const auto run = run_case(scheme, TestCase::shu_osher, 400, kGas, std::nullopt, 0.45, true);
    const auto rep = entropy_production_report(run.trajectory, kGas);
    const double frac = static_cast<double>(rep.above(1e-8 * rep.scale)) / static_cast<double>(rep.entries);
    ok = ok && frac < 1e-3;
    detail += fmt("%s %.4f%% ", name.c_str(), 100.0 * frac);
  };
  check("palft", make_preset("palft"));
  if (ctx.weights) {
    check("ddlft", make_preset("ddlft", &*ctx.weights));
  } else {
    ok = false;
    detail += "ddlft n/a (no weights) ";
  }
  return {ok, detail + "(need < 0.1%)"};
}

Outcome criterion_4(Context&) {
  const auto run = run_case(make_preset("pplft"), TestCase::shu_osher, 400, kGas, std::nullopt, 0.45, true);
  double min_rho = std::numeric_limits<double>::infinity(), min_p = min_rho;
  for (const auto& snap : run.trajectory.snapshots)
    for (const auto& s : snap.states) {
      min_rho = std::min(min_rho, s.rho);
      min_p = std::min(min_p, pressure(s, kGas));
    }
  const bool reached = run.trajectory.final_state().time == 1.8;

  std::mt19937_64 rng(2024);
  RunConfig cfg{make_preset("pplft"), BoundaryKind::periodic, 0.45, 0.0};
  cfg.record = true;
  int bad = 0;
  std::size_t rejected = 0;
  for (int t = 0; t < 100; ++t) {
    std::vector<State> cells(40);
    for (auto& s : cells) s = testing_support::random_state(rng, kGas, 1e-3, 5.0, 5.0, 1e-3, 10.0);
    const FieldSnapshot f{Grid1D(40, 0, 1), 0, cells};
    cfg.t_end = compute_dt(f, 0.45, kGas);
    try {
      const auto traj = advance(cfg, f, kGas);
      rejected += traj.rejected_steps;
      for (const auto& snap : traj.snapshots) bad += first_inadmissible(snap.states, kGas) >= 0;
    } catch (const std::exception&) {
      ++bad;
    }
  }
  const bool ok = reached && min_rho > 0 && min_p > 0 && bad == 0;
  return {ok, fmt("T=1.8 %s, min rho %.4f, min p %.4f; random fields: %d inadmissible of 100 (%zu step retries)",
                  reached ? "reached" : "NOT reached", min_rho, min_p, bad, rejected)};
}

Outcome criterion_5(Context&) {
  std::string detail;
  bool ok = true;
  for (int m : {2, 3, 4}) {
    std::vector<double> hs, es;
    for (int k = 3; k <= 8; ++k) {
      const double h = std::ldexp(1.0, -k);
      std::vector<double> pts(static_cast<std::size_t>(m + 1));
      for (int j = 0; j <= m; ++j) pts[static_cast<std::size_t>(j)] = 0.4 + j * h;
      const auto op = annihilation_coefficients(pts, pts[static_cast<std::size_t>((m - 1) / 2)] + 0.5 * h);
      std::vector<double> s(pts.size());
      for (std::size_t j = 0; j < s.size(); ++j) s[j] = std::sin(pts[j]);
      hs.push_back(h);
      es.push_back(std::abs(pa_jump(op, s)));
    }
    const double sl = oracles::log_slope(hs, es);
    ok = ok && sl >= m - 0.3;
    detail += fmt("m=%d slope %.2f; ", m, sl);
  }
  double worst_jump = 1e300;
  for (int m : {1, 2, 3, 4}) {
    std::vector<double> hs, es;
    for (int k = 3; k <= 8; ++k) {
      const double h = std::ldexp(1.0, -k);
      std::vector<double> pts(static_cast<std::size_t>(m + 1));
      for (int j = 0; j <= m; ++j) pts[static_cast<std::size_t>(j)] = 0.4 + j * h;
      const double xi = pts[static_cast<std::size_t>((m - 1) / 2)] + 0.5 * h;
      const auto op = annihilation_coefficients(pts, xi);
      std::vector<double> s(pts.size());
      for (std::size_t j = 0; j < s.size(); ++j) s[j] = std::sin(3.0 * pts[j]) + (pts[j] >= xi ? 1.5 : 0.0);
      hs.push_back(h);
      es.push_back(std::abs(pa_jump(op, s) - 1.5));
    }
    worst_jump = std::min(worst_jump, oracles::log_slope(hs, es));
  }
  ok = ok && worst_jump >= 0.7;
  return {ok, detail + fmt("jump recovery slope >= %.2f (need m - 0.3 and 0.7)", worst_jump)};
}

Outcome criterion_6(Context&) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> d(-1, 1);
  double worst = 0;
  for (int t = 0; t < 10000; ++t) {
    const Flux f{d(rng), d(rng), d(rng)}, g{d(rng), d(rng), d(rng)}, h{d(rng), d(rng), d(rng)};
    worst = std::max(worst, std::abs(alpha_target(f, g, h) - oracles::brute_alpha(f, g, h)));
  }
  return {worst <= 2e-4, fmt("max |dalpha| = %.2e over 10^4 triples (need <= 2e-4)", worst)};
}

Outcome criterion_7(Context&) {
  const std::size_t n = 32;
  const auto cells = testing_support::smooth_field(n, kGas);
  const double dx = 1.0 / n;
  const FieldSnapshot field{Grid1D(n, 0, 1), 0.0, cells};
  const double dt0 = compute_dt(field, 0.45, kGas);
  std::vector<double> dts, errs;
  for (int j = 0; j < 4; ++j) {
    const double dt = dt0 / (1 << j);
    const auto q = rk_quadrature_flux(BaseFlux::ec2, TimeQuadrature::ssprk22, field, BoundaryKind::periodic, dt / dx, kGas);
    const auto ref = oracles::reference_flux_average(BaseFlux::ec2, cells, dt, dx, 100, kGas);
    double e = 0;
    for (std::size_t i = 0; i < ref.size(); ++i) e = std::max(e, max_abs(q.flux[i] - ref[i]));
    dts.push_back(dt);
    errs.push_back(e);
  }
  const double sl = oracles::log_slope(dts, errs);

  double worst = 0;
  const double lambda = dt0 / dx;
  for (BaseFlux kind : {BaseFlux::llf, BaseFlux::ec2, BaseFlux::ec4})
    for (TimeQuadrature q : {TimeQuadrature::ssprk22, TimeQuadrature::ssprk33}) {
      const auto direct = oracles::direct_ssprk(kind, q, cells, lambda, kGas);
      const auto f = rk_quadrature_flux(kind, q, field, BoundaryKind::periodic, lambda, kGas);
      const auto via = oracles::euler_update(cells, f.flux, lambda);
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t c = 0; c < 3; ++c) worst = std::max(worst, std::abs(via[k][c] - direct[k][c]) / std::max(1.0, std::abs(direct[k][c])));
    }
  return {sl >= 1.8 && worst <= 1e-13, fmt("flux error slope %.2f (need >= 1.8); update mismatch %.1e (need <= 1e-13)", sl, worst)};
}

Outcome criterion_8(Context&) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> x(-1, 1), y(0, 1);
  double worst = 0;
  for (auto kind : {LossKind::mse, LossKind::mexp, LossKind::nonsym})
    for (int t = 0; t < 10; ++t) {
      const auto model = MlpModel::random({4, 5, 3, 1}, 100 + t);
      Dataset d;
      d.n_inputs = 4;
      std::vector<double> in(4);
      for (int r = 0; r < 6; ++r) {
        for (auto& v : in) v = x(rng);
        d.add(in, y(rng));
      }
      worst = std::max(worst, oracles::gradient_error(model, d, kind));
    }
  return {worst <= 1e-4, fmt("max relative gradient error %.2e over 30 models (need <= 1e-4)", worst)};
}

Outcome criterion_9(Context&) {
  DatasetOptions opt;
  opt.n_ics = 1;
  opt.n_fine = 1000;
  opt.n_coarse = 100;
  opt.n_samples = 100;
  opt.seed = 9;
  const auto build = build_dataset(opt, kGas);
  const auto& data = build.data;

  const auto quick = train(data, TrainingSchedule::quick(), LossKind::nonsym, 9);
  const double first = quick.epoch_loss.front(), last = quick.epoch_loss.back();
  const bool quick_ok = last <= 0.7 * first;

  const auto full = train(data, TrainingSchedule::full(), LossKind::nonsym, 9);
  bool finite = true;
  for (double l : full.epoch_loss) finite = finite && std::isfinite(l);
  std::vector<double> section_mean(7, 0.0);
  std::vector<int> count(7, 0);
  for (std::size_t e = 0; e < full.epoch_loss.size(); ++e) {
    section_mean[static_cast<std::size_t>(full.epoch_section[e])] += full.epoch_loss[e];
    ++count[static_cast<std::size_t>(full.epoch_section[e])];
  }
  for (std::size_t s = 0; s < 7; ++s) section_mean[s] /= count[s];
  // mean of the consecutive section changes
  const double mean_change = (section_mean.back() - section_mean.front()) / 6.0;
  const bool full_ok = finite && mean_change <= 0.0;
  return {quick_ok && full_ok,
          fmt("%zu samples; quick: first %.3e last %.3e (-%.0f%%, need >= 30%%); full: %s, section means %.3e -> %.3e",
              data.size(), first, last, 100.0 * (1.0 - last / first), finite ? "finite" : "NOT finite",
              section_mean.front(), section_mean.back())};
}

Outcome criterion_10(Context& ctx) {
  const double ref_tv = total_variation(density_of(ctx.reference().states));
  std::string detail = fmt("reference TV %.3f; ", ref_tv);
  bool ok = true;
  auto check = [&](const std::string& name, const SchemeConfig& scheme) {
    const auto run = run_case(scheme, TestCase::shu_osher, 400, kGas);
    const double tv = total_variation(density_of(run.trajectory.final_state().states));
    const double rel = tv / ref_tv - 1.0;
    ok = ok && std::abs(rel) <= 0.15;
    detail += fmt("%s %.3f (%+.1f%%) ", name.c_str(), tv, 100.0 * rel);
  };
  check("delft", make_preset("delft"));
  check("palft", make_preset("palft"));
  if (ctx.weights) {
    check("ddlft", make_preset("ddlft", &*ctx.weights));
  } else {
    ok = false;
    detail += "ddlft n/a (no weights) ";
  }
  return {ok, detail + "(need within 15%)"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  Context ctx;
  ctx.weights_path = std::string(GTFLUX_SOURCE_DIR) + "/data/ddlft_weights.json";
  bool report_only = false;
  std::string out;
  std::vector<int> only;
  app.add_option("--weights", ctx.weights_path, "DDLFT weight file");
  app.add_flag("--report-only", report_only, "exit 0 once every criterion has been evaluated");
  app.add_option("--out", out, "also write the report to this file");
  app.add_option("--only", only, "evaluate only these criteria");
  CLI11_PARSE(app, argc, argv);

  if (std::filesystem::exists(ctx.weights_path)) ctx.weights = load_model(ctx.weights_path);

  const std::vector<std::function<Outcome(Context&)>> criteria{criterion_1, criterion_2, criterion_3, criterion_4,
                                                              criterion_5, criterion_6, criterion_7, criterion_8,
                                                              criterion_9, criterion_10};
  std::ostringstream report;
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i](ctx);
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    const std::string line = fmt("criterion %2d: %s  %s [%.1f s]", id, o.pass ? "PASS" : "FAIL", o.detail.c_str(), seconds_since(t0));
    std::printf("%s\n", line.c_str());
    std::fflush(stdout);
    report << line << '\n';
  }
  std::printf("%d criteria failed\n", failed);
  report << failed << " criteria failed\n";
  if (!out.empty()) std::ofstream(out) << report.str();
  return report_only ? 0 : failed;
}
