// Command-line front end: run, gen-data, train, convergence, entropy-report.
#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include "gtflux/data_pipeline.hpp"
#include "gtflux/experiments.hpp"

using namespace gtflux;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitSolver = 3;
constexpr int kExitIo = 4;

std::vector<int> parse_levels(const std::string& spec) {
  const auto dots = spec.find("..");
  if (dots == std::string::npos) return {std::stoi(spec)};
  const int lo = std::stoi(spec.substr(0, dots)), hi = std::stoi(spec.substr(dots + 2));
  if (hi < lo) throw std::invalid_argument("empty level range " + spec);
  std::vector<int> out;
  for (int l = lo; l <= hi; ++l) out.push_back(l);
  return out;
}

SchemeConfig scheme_from(const std::string& name, const std::string& weights_path) {
  if (name == "ddlft") {
    if (weights_path.empty()) throw std::invalid_argument("--weights is required for ddlft");
    const MlpModel model = load_model(weights_path);
    return make_preset(name, &model);
  }
  return make_preset(name);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Blended-flux finite volume solver for the 1D Euler equations"};
  app.require_subcommand(1);
  const GasModel gas{1.4};

  std::string scheme = "palft", testcase = "shu-osher", weights, out;
  std::size_t cells = 400;
  double cfl = 0.45;
  std::optional<double> t_end;

  auto* run = app.add_subcommand("run", "Run a test case and write x, rho, v, p, alpha as CSV");
  run->add_option("--scheme", scheme)->check(CLI::IsMember(preset_names()));
  run->add_option("--testcase", testcase)->check(CLI::IsMember({"shu-osher", "smooth", "smooth-transport"}));
  run->add_option("--cells", cells)->check(CLI::PositiveNumber);
  run->add_option("--cfl", cfl);
  run->add_option("--t-end", t_end);
  run->add_option("--weights", weights);
  run->add_option("--out", out);

  std::string levels = "5..10";
  auto* conv = app.add_subcommand("convergence", "Smooth-transport L1 errors and EOC");
  conv->add_option("--scheme", scheme)->check(CLI::IsMember(preset_names()));
  conv->add_option("--levels", levels, "e.g. 5..10");
  conv->add_option("--cfl", cfl);
  conv->add_option("--weights", weights);
  conv->add_option("--out", out);

  auto* ent = app.add_subcommand("entropy-report", "Per-cell entropy production of a recorded run");
  ent->add_option("--scheme", scheme)->check(CLI::IsMember(preset_names()));
  ent->add_option("--testcase", testcase)->check(CLI::IsMember({"shu-osher", "smooth", "smooth-transport"}));
  ent->add_option("--cells", cells)->check(CLI::PositiveNumber);
  ent->add_option("--cfl", cfl);
  ent->add_option("--t-end", t_end);
  ent->add_option("--weights", weights);
  ent->add_option("--out", out, "CSV of step, cell, production");

  DatasetOptions dopt;
  std::string manifest;
  auto* gen = app.add_subcommand("gen-data", "Generate the training dataset");
  gen->add_option("--ics", dopt.n_ics);
  gen->add_option("--fine", dopt.n_fine);
  gen->add_option("--coarse", dopt.n_coarse);
  gen->add_option("--samples", dopt.n_samples);
  gen->add_option("--cfl", dopt.cfl);
  gen->add_option("--seed", dopt.seed);
  gen->add_option("--out", out)->required();
  gen->add_option("--manifest", manifest, "defaults to <out>.json");

  std::string data_path, loss_name = "nonsym", schedule_name = "full";
  std::uint64_t seed = 1;
  auto* tr = app.add_subcommand("train", "Train the alpha network");
  tr->add_option("--data", data_path)->required();
  tr->add_option("--loss", loss_name)->check(CLI::IsMember({"mse", "mexp", "nonsym"}));
  tr->add_option("--schedule", schedule_name)->check(CLI::IsMember({"full", "quick"}));
  tr->add_option("--seed", seed);
  tr->add_option("--out", out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*run) {
      const TestCase tc = parse_test_case(testcase);
      const RunReport rep = run_case(scheme_from(scheme, weights), tc, cells, gas, t_end, cfl, true);
      const auto& traj = rep.trajectory;
      double min_rho = 1e300, min_p = 1e300;
      for (const auto& snap : traj.snapshots)
        for (const auto& s : snap.states) {
          min_rho = std::min(min_rho, s.rho);
          min_p = std::min(min_p, pressure(s, gas));
        }
      std::vector<double> alpha;
      if (!traj.steps.empty())
        for (const auto& r : traj.steps.back().interfaces) alpha.push_back(r.alpha);
      std::printf("scheme=%s testcase=%s cells=%zu steps=%zu t=%.6g wall=%.3fs min_rho=%.6g min_p=%.6g tv_rho=%.6g\n",
                  scheme.c_str(), to_string(tc), cells, traj.step_count, traj.final_state().time, rep.wall_seconds,
                  min_rho, min_p, total_variation(density_of(traj.final_state().states)));
      if (!out.empty()) write_field_csv(traj.final_state(), alpha, gas, out);
    } else if (*conv) {
      const auto rows = convergence_study(scheme_from(scheme, weights), parse_levels(levels), gas, cfl);
      std::FILE* f = stdout;
      std::printf("%8s %14s %14s %8s\n", "N", "L1(rho)", "L1(total)", "EOC");
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i == 0)
          std::printf("%8zu %14.6e %14.6e %8s\n", rows[i].cells, rows[i].error.density, rows[i].error.total, "-");
        else
          std::printf("%8zu %14.6e %14.6e %8.3f\n", rows[i].cells, rows[i].error.density, rows[i].error.total,
                      rows[i].order);
      }
      if (!out.empty()) {
        f = std::fopen(out.c_str(), "w");
        if (!f) throw std::ios_base::failure("cannot write " + out);
        std::fprintf(f, "N,l1_rho,l1_total,eoc\n");
        for (const auto& r : rows) std::fprintf(f, "%zu,%.17g,%.17g,%.17g\n", r.cells, r.error.density, r.error.total, r.order);
        std::fclose(f);
      }
    } else if (*ent) {
      const TestCase tc = parse_test_case(testcase);
      const RunReport rep = run_case(scheme_from(scheme, weights), tc, cells, gas, t_end, cfl, true);
      const EntropyReport er = entropy_production_report(rep.trajectory, gas);
      std::printf("entries=%zu max_production=%.6e scale=%.6e above_1e-10_scale=%zu above_1e-8_scale=%zu\n",
                  er.entries, er.max_production, er.scale, er.above(1e-10 * er.scale), er.above(1e-8 * er.scale));
      if (!out.empty()) {
        std::ofstream f(out);
        if (!f) throw std::ios_base::failure("cannot write " + out);
        f << "step,cell,production\n";
        f.precision(17);
        for (std::size_t n = 0; n < er.production.size(); ++n)
          for (std::size_t k = 0; k < er.production[n].size(); ++k) f << n << ',' << k << ',' << er.production[n][k] << '\n';
      }
    } else if (*gen) {
      const auto build = build_dataset(dopt, gas, [](int ic, std::size_t steps) {
        std::fprintf(stderr, "ic %d done (%zu fine steps)\n", ic, steps);
      });
      write_dataset_csv(build.data, out);
      const std::string mpath = manifest.empty() ? out + ".json" : manifest;
      std::ofstream m(mpath);
      if (!m) throw std::ios_base::failure("cannot write " + mpath);
      m << build.manifest.to_json() << '\n';
      std::printf("samples=%zu fine_steps=%zu failed_high_order=%zu\n", build.manifest.samples,
                  build.manifest.fine_steps, build.manifest.failed_high_order);
    } else if (*tr) {
      const Dataset data = read_dataset_csv(data_path);
      const auto res = train(data, TrainingSchedule::parse(schedule_name), parse_loss(loss_name), seed,
                             [](int s, int e, double l) { std::printf("section %d epoch %2d loss %.6e\n", s + 1, e + 1, l); std::fflush(stdout); });
      save_model(res.model, out);
    }
  } catch (const std::ios_base::failure& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  } catch (const PositivityError& e) {
    std::fprintf(stderr, "solver failure: %s (cell %ld)\n", e.what(), e.cell());
    return kExitSolver;
  } catch (const CflError& e) {
    std::fprintf(stderr, "solver failure: %s\n", e.what());
    return kExitSolver;
  } catch (const StepBudgetError& e) {
    std::fprintf(stderr, "solver failure: %s\n", e.what());
    return kExitSolver;
  } catch (const DomainError& e) {
    std::fprintf(stderr, "solver failure: %s\n", e.what());
    return kExitSolver;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
  return 0;
}
