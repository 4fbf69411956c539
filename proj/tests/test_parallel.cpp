#include <doctest.h>
#include <omp.h>

#include "gtflux/data_pipeline.hpp"
#include "gtflux/experiments.hpp"
#include "support.hpp"

using namespace gtflux;

namespace {
const GasModel kGas{1.4};

// Forces several threads even on a single-core machine.
struct Threads {
  int saved = omp_get_max_threads();
  explicit Threads(int n) { omp_set_num_threads(n); }
  ~Threads() { omp_set_num_threads(saved); }
};

bool same(const std::vector<Flux>& a, const std::vector<Flux>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!(a[i] == b[i])) return false;
  return true;
}
}  // namespace

TEST_CASE("omp_for rethrows the lowest failing index") {
  Threads t(4);
  try {
    for_each_index(Exec::parallel, 1000, [](std::ptrdiff_t i) {
      if (i % 97 == 13) throw std::runtime_error(std::to_string(i));
    });
    FAIL("expected an exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "13");
  }
}

TEST_CASE("kernels are bitwise identical serial and parallel") {
  Threads t(4);
  std::mt19937_64 rng(10);
  const auto cells = testing_support::random_field(rng, 257, kGas);
  const FieldSnapshot f{Grid1D(257, 0, 1), 0, cells};
  const double dt = compute_dt(f, 0.45, kGas), lambda = dt / f.grid.dx();
  PaddedField u(cells, 5, BoundaryKind::periodic);

  for (BaseFlux k : {BaseFlux::llf, BaseFlux::ec2, BaseFlux::ec4}) {
    const auto a = interface_fluxes(k, u, kGas, Exec::serial, true), b = interface_fluxes(k, u, kGas, Exec::parallel, true);
    CHECK(same(a.flux, b.flux));
    CHECK(a.entropy == b.entropy);
    const auto qa = rk_quadrature_flux(k, TimeQuadrature::ssprk33, f, BoundaryKind::periodic, lambda, kGas, Exec::serial, true);
    const auto qb = rk_quadrature_flux(k, TimeQuadrature::ssprk33, f, BoundaryKind::periodic, lambda, kGas, Exec::parallel, true);
    CHECK(same(qa.flux, qb.flux));
    CHECK(qa.entropy == qb.entropy);
  }

  const auto g = interface_fluxes(BaseFlux::llf, u, kGas, Exec::serial, true);
  const auto h = interface_fluxes(BaseFlux::ec2, u, kGas, Exec::serial, true);
  CHECK(alpha_field_condition_f(u, g, h, dt, f.grid.dx(), kGas, Exec::serial) ==
        alpha_field_condition_f(u, g, h, dt, f.grid.dx(), kGas, Exec::parallel));
  CHECK(alpha_field_positivity(u, g.flux, h.flux, lambda, kGas, Exec::serial) ==
        alpha_field_positivity(u, g.flux, h.flux, lambda, kGas, Exec::parallel));
  CHECK(pa_alpha_field(u, 1.0, {}, Exec::serial) == pa_alpha_field(u, 1.0, {}, Exec::parallel));
  CHECK(llf_entropy_rates(u, dt, f.grid.dx(), kGas, Exec::serial) == llf_entropy_rates(u, dt, f.grid.dx(), kGas, Exec::parallel));
  const auto model = MlpModel::random(default_dims(), 3);
  CHECK(nn_alpha_field(model, u, kGas, Exec::serial) == nn_alpha_field(model, u, kGas, Exec::parallel));

  std::vector<Flux> ea, eb;
  const auto ma = muscl_step(f, 0.5 * dt, BoundaryKind::periodic, kGas, Exec::serial, &ea);
  const auto mb = muscl_step(f, 0.5 * dt, BoundaryKind::periodic, kGas, Exec::parallel, &eb);
  CHECK(testing_support::bitwise_equal(ma.states, mb.states));
  CHECK(same(ea, eb));
}

TEST_CASE("whole runs are bitwise identical serial and parallel") {
  Threads t(4);
  const auto model = MlpModel::random(default_dims(), 5);
  for (const auto& name : preset_names()) {
    CAPTURE(name);
    const auto scheme = make_preset(name, &model);
    const auto a = run_case(scheme, TestCase::shu_osher, 200, kGas, 0.3, 0.45, false, Exec::serial);
    const auto b = run_case(scheme, TestCase::shu_osher, 200, kGas, 0.3, 0.45, false, Exec::parallel);
    CHECK(a.trajectory.step_count == b.trajectory.step_count);
    CHECK(testing_support::bitwise_equal(a.trajectory.final_state().states, b.trajectory.final_state().states));
  }
}

TEST_CASE("dataset generation is identical serial and parallel") {
  Threads t(4);
  DatasetOptions opt;
  opt.n_ics = 2;
  opt.n_fine = 200;
  opt.n_coarse = 10;
  opt.n_samples = 3;
  opt.t_end = 0.05;
  opt.exec = Exec::serial;
  const auto a = build_dataset(opt, kGas);
  opt.exec = Exec::parallel;
  const auto b = build_dataset(opt, kGas);
  CHECK(a.data.inputs == b.data.inputs);
  CHECK(a.data.targets == b.data.targets);
}
