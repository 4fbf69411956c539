// Serial reference vs OpenMP path for the hot kernels. Second argument selects
// the policy: 0 serial, 1 parallel.
#include <benchmark/benchmark.h>

#include "gtflux/data_pipeline.hpp"
#include "gtflux/experiments.hpp"
#include "gtflux/limiters.hpp"
#include "gtflux/pa.hpp"
#include "gtflux/quadrature.hpp"

using namespace gtflux;

namespace {

const GasModel kGas{1.4};

FieldSnapshot shu_osher(std::size_t cells) {
  return initial_field(TestCase::shu_osher, default_setup(TestCase::shu_osher, cells).grid, kGas);
}

Exec exec_of(const benchmark::State& st) { return st.range(1) ? Exec::parallel : Exec::serial; }

void sizes(benchmark::internal::Benchmark* b) {
  for (long n : {1024, 16384})
    for (long e : {0, 1}) b->Args({n, e});
}

void BM_InterfaceFluxesEc4(benchmark::State& st) {
  const auto f = shu_osher(st.range(0));
  const PaddedField u(f.states, required_ghosts(BaseFlux::ec4), BoundaryKind::extrapolation);
  for (auto _ : st) benchmark::DoNotOptimize(interface_fluxes(BaseFlux::ec4, u, kGas, exec_of(st), true));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_InterfaceFluxesEc4)->Apply(sizes);

void BM_QuadratureSsprk33(benchmark::State& st) {
  const auto f = shu_osher(st.range(0));
  const double dt = compute_dt(f, 0.45, kGas);
  for (auto _ : st)
    benchmark::DoNotOptimize(rk_quadrature_flux(BaseFlux::ec4, TimeQuadrature::ssprk33, f, BoundaryKind::extrapolation,
                                                dt / f.grid.dx(), kGas, exec_of(st), true));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_QuadratureSsprk33)->Apply(sizes);

void BM_AlphaConditionF(benchmark::State& st) {
  const auto f = shu_osher(st.range(0));
  const double dt = compute_dt(f, 0.45, kGas), dx = f.grid.dx();
  const PaddedField u(f.states, 4, BoundaryKind::extrapolation);
  const auto g = rk_quadrature_flux(BaseFlux::llf, TimeQuadrature::forward_euler, f, BoundaryKind::extrapolation, dt / dx,
                                    kGas, Exec::serial, true);
  const auto h = rk_quadrature_flux(BaseFlux::ec2, TimeQuadrature::ssprk22, f, BoundaryKind::extrapolation, dt / dx,
                                    kGas, Exec::serial, true);
  for (auto _ : st) benchmark::DoNotOptimize(alpha_field_condition_f(u, g, h, dt, dx, kGas, exec_of(st)));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_AlphaConditionF)->Apply(sizes);

void BM_AlphaPA(benchmark::State& st) {
  const auto f = shu_osher(st.range(0));
  const PaddedField u(f.states, PAParams{}.half_width, BoundaryKind::extrapolation);
  for (auto _ : st) benchmark::DoNotOptimize(pa_alpha_field(u, f.grid.length(), {}, exec_of(st)));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_AlphaPA)->Apply(sizes);

void BM_AlphaNN(benchmark::State& st) {
  const auto f = shu_osher(st.range(0));
  const PaddedField u(f.states, kNnCellsPerSide, BoundaryKind::extrapolation);
  const MlpModel model = MlpModel::random(default_dims(), 7);
  for (auto _ : st) benchmark::DoNotOptimize(nn_alpha_field(model, u, kGas, exec_of(st)));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_AlphaNN)->Apply(sizes);

void BM_MusclStep(benchmark::State& st) {
  const auto f = shu_osher(st.range(0));
  const double dt = compute_dt(f, 0.45, kGas);
  for (auto _ : st) benchmark::DoNotOptimize(muscl_step(f, dt, BoundaryKind::extrapolation, kGas, exec_of(st)));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_MusclStep)->Apply(sizes);

void BM_AdvanceStepPalft(benchmark::State& st) {
  const auto f = shu_osher(st.range(0));
  RunConfig cfg;
  cfg.scheme = make_preset("palft");
  cfg.bc = BoundaryKind::extrapolation;
  cfg.exec = exec_of(st);
  const double dt = compute_dt(f, cfg.cfl, kGas);
  for (auto _ : st) benchmark::DoNotOptimize(advance_step(f, cfg, dt, kGas));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_AdvanceStepPalft)->Apply(sizes);

}  // namespace

BENCHMARK_MAIN();
