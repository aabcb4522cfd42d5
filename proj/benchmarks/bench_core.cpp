// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "curlvar/maxwell.hpp"
#include "curlvar/solver.hpp"

using namespace curlvar;

namespace {

Problem make(int n) {
  return Problem::create(build_grid(n, n, 10.0, 4), PotentialSpec::sign_changing(),
                         NonlinearitySpec::competing_powers(4.0, 3.0, Coefficient::constant(1.0)));
}

void BM_OperatorApply(benchmark::State& state) {
  const Problem prob = make(static_cast<int>(state.range(0)));
  const ScalarField u = random_field(prob.grid_ptr(), 1);
  for (auto _ : state) benchmark::DoNotOptimize(prob.op().apply(u));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(u.size()));
}

void BM_Energy(benchmark::State& state) {
  const Problem prob = make(static_cast<int>(state.range(0)));
  const ScalarField u = random_bump(prob.grid_ptr(), 1);
  for (auto _ : state) benchmark::DoNotOptimize(energy_J(prob, u).total);
}

void BM_QGradient(benchmark::State& state) {
  const Problem prob = make(static_cast<int>(state.range(0)));
  const ScalarField u = 3.0 * random_bump(prob.grid_ptr(), 1);
  for (auto _ : state) benchmark::DoNotOptimize(gradient(prob, u, Metric::Q));
}

void BM_MaximizeRay(benchmark::State& state) {
  const Problem prob = make(static_cast<int>(state.range(0)));
  const ScalarField u = random_bump(prob.grid_ptr(), 1);
  for (auto _ : state) benchmark::DoNotOptimize(maximize_ray(prob, u).t_star());
}

void BM_Reconstruct(benchmark::State& state) {
  const Problem prob = make(64);
  const ScalarField u = random_bump(prob.grid_ptr(), 1);
  const int n_theta = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(derivative_integrals(reconstruct_E(u, n_theta)));
}

}  // namespace

BENCHMARK(BM_OperatorApply)->Arg(64)->Arg(128)->Arg(256);
BENCHMARK(BM_Energy)->Arg(64)->Arg(128);
BENCHMARK(BM_QGradient)->Arg(64)->Arg(128);
BENCHMARK(BM_MaximizeRay)->Arg(64)->Arg(128);
BENCHMARK(BM_Reconstruct)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
