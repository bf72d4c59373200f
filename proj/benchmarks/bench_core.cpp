#include <benchmark/benchmark.h>

#include "twophase/energy.hpp"
#include "twophase/freeboundary.hpp"
#include "twophase/solver.hpp"

using namespace twophase;

namespace {

ProblemSpec two_phase_spec() {
  ProblemSpec spec;
  spec.domain = Domain::rectangle(0.0, 1.0, 0.0, 1.0);
  spec.law = EnergyLaw::exponential();
  spec.gamma_plus = Coefficient::constant(1.5);
  spec.gamma_minus = Coefficient::constant(0.5);
  spec.c_gamma = 0.5;
  spec.psi = Coefficient::affine(-0.45, 1.0, 0.25);
  return spec;
}

void BM_EnergyValue(benchmark::State& state) {
  const ProblemSpec spec = two_phase_spec();
  const Mesh mesh = build_mesh(spec.domain, state.range(0), state.range(0));
  const ScalarField u = sample(spec.psi, mesh);
  EnergyModel model(spec, mesh, SmoothedIndicator{1e-3});
  for (auto _ : state) benchmark::DoNotOptimize(model.value(u));
}
BENCHMARK(BM_EnergyValue)->Arg(64)->Arg(128);

void BM_EnergyGradient(benchmark::State& state) {
  const ProblemSpec spec = two_phase_spec();
  const Mesh mesh = build_mesh(spec.domain, state.range(0), state.range(0));
  const ScalarField u = sample(spec.psi, mesh);
  EnergyModel model(spec, mesh, SmoothedIndicator{1e-3});
  for (auto _ : state) benchmark::DoNotOptimize(model.gradient(u));
}
BENCHMARK(BM_EnergyGradient)->Arg(64)->Arg(128);

void BM_LevelSet(benchmark::State& state) {
  const ProblemSpec spec = two_phase_spec();
  const Mesh mesh = build_mesh(spec.domain, state.range(0), state.range(0));
  const ScalarField u = sample(spec.psi, mesh);
  for (auto _ : state) benchmark::DoNotOptimize(level_set(mesh, u, 0.0));
}
BENCHMARK(BM_LevelSet)->Arg(128)->Arg(256);

void BM_Oracle1D(benchmark::State& state) {
  const EnergyLaw law = EnergyLaw::exponential();
  for (auto _ : state)
    benchmark::DoNotOptimize(oracle_1d(0.2, 0.2, 5.0, 0.0, law, state.range(0)));
}
BENCHMARK(BM_Oracle1D)->Arg(10000)->Arg(1000000);

void BM_SolveSmall(benchmark::State& state) {
  const ProblemSpec spec = two_phase_spec();
  const Mesh mesh = build_mesh(spec.domain, 32, 32);
  SolverOptions opts;
  opts.grad_tol = 1e-6;
  opts.max_iters = 500;
  opts.k_schedule = {1, 4, EnergyLaw::kInfinite};
  opts.delta_schedule = {0.01};
  for (auto _ : state) benchmark::DoNotOptimize(solve(spec, mesh, opts));
}
BENCHMARK(BM_SolveSmall);

}  // namespace

BENCHMARK_MAIN();
