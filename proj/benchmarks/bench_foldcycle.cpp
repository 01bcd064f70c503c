#include <benchmark/benchmark.h>

#include "foldcycle/cycles.hpp"

using namespace foldcycle;

namespace {

PiecewiseField sys_a(int k, double c) {
  const int n = 2 * k - 1;
  return {{Poly2::constant(1.0), Poly2::from_terms({{n, 0, -1.0}, {n + 1, 0, c}})},
          {Poly2::constant(-1.0), Poly2::from_terms({{n, 0, -1.0}})}};
}

const std::vector<double>& lambda_for(int k) {
  static const std::vector<double> two{-1.0, 1.0};
  static const std::vector<double> three{-1.0, 1.0, 2.0, 3.0};
  return k == 2 ? two : three;
}

void BM_ShiftX(benchmark::State& state) {
  const Poly2 p = sys_a(static_cast<int>(state.range(0)), 1.0).upper.Y * Poly2::monomial(0, 2, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(p.shift_x(0.1));
}
BENCHMARK(BM_ShiftX)->Arg(2)->Arg(4)->Arg(8);

void BM_Classify(benchmark::State& state) {
  const PiecewiseField z = sys_a(static_cast<int>(state.range(0)), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(classify_mts(z));
}
BENCHMARK(BM_Classify)->DenseRange(1, 3);

void BM_HalfReturn(benchmark::State& state) {
  const PiecewiseField z = sys_a(static_cast<int>(state.range(0)), 1.0);
  const IntegratorConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(half_return(z, Side::Upper, 0.05, cfg));
}
BENCHMARK(BM_HalfReturn)->DenseRange(1, 3);

void BM_BuildPerturbation(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const PiecewiseField z = sys_a(k, 1.0);
  const UnfoldingParams p{k, lambda_for(k), 0.05, 0.0};
  for (auto _ : state) benchmark::DoNotOptimize(build_perturbation(z, p));
}
BENCHMARK(BM_BuildPerturbation)->DenseRange(2, 3);

void BM_EstimateLyapunov(benchmark::State& state) {
  const PiecewiseField z = sys_a(static_cast<int>(state.range(0)), 1.0);
  const IntegratorConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(estimate_lyapunov(z, 0.001, 0.02, cfg));
}
BENCHMARK(BM_EstimateLyapunov)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

void BM_CycleCensus(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const UnfoldingParams p{k, lambda_for(k), k == 2 ? 0.1 : 0.05, k == 2 ? -1e-6 : -1e-8};
  const PiecewiseField z = sys_a(k, 1.0);
  const IntegratorConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(cycle_census(z, p, cfg, 0.1));
}
BENCHMARK(BM_CycleCensus)->DenseRange(2, 3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
