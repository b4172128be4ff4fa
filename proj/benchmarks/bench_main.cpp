#include <benchmark/benchmark.h>

#include "cforge/contours.hpp"
#include "cforge/reparam.hpp"
#include "cforge/root_cf.hpp"
#include "cforge/verify.hpp"

using namespace cforge;

namespace {

FourierCurve bench_curve() {
  SampleStream rng(7);
  return random_polynomial_curve(rng, 12);
}

void BM_AssembleSystem(benchmark::State& state) {
  const auto curve = bench_curve();
  const int M = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(assemble_system(curve, M, 8 * M));
}
BENCHMARK(BM_AssembleSystem)->RangeMultiplier(2)->Range(16, 256)->Unit(benchmark::kMillisecond);

void BM_SolveReparam(benchmark::State& state) {
  const auto curve = bench_curve();
  const int M = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_reparam(curve, M, 8 * M));
}
BENCHMARK(BM_SolveReparam)->RangeMultiplier(2)->Range(16, 256)->Unit(benchmark::kMillisecond);

void BM_TaylorCoeffs(benchmark::State& state) {
  const auto sol = solve_reparam(bench_curve(), 64, 512);
  const int D = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(taylor_coeffs(sol, D));
}
BENCHMARK(BM_TaylorCoeffs)->Arg(16)->Arg(64)->Arg(256)->Unit(benchmark::kMicrosecond);

void BM_RootCF(benchmark::State& state) {
  const CFApproximant approx{1, static_cast<int>(state.range(0)), 20};
  const cplx z{2.0, 1.5};
  for (auto _ : state) benchmark::DoNotOptimize(root_cf(z, approx));
}
BENCHMARK(BM_RootCF)->Arg(2)->Arg(3)->Arg(8);

void BM_SqrtCF(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const cplx z{0.3, -2.0};
  for (auto _ : state) benchmark::DoNotOptimize(sqrt_cf(z, n));
}
BENCHMARK(BM_SqrtCF)->Arg(4)->Arg(20)->Arg(100);

}  // namespace
BENCHMARK_MAIN();
