#include <benchmark/benchmark.h>

#include "psdrank/combinatorics.hpp"
#include "psdrank/experiments.hpp"
#include "psdrank/polar.hpp"
#include "psdrank/sdp.hpp"

using namespace psdrank;

static void BM_Delta(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const int r = m / 2;
  for (auto _ : state) benchmark::DoNotOptimize(delta(triangular(m - r), m, r));
}
BENCHMARK(BM_Delta)->DenseRange(4, 12, 4);

static void BM_PsiInterval(benchmark::State& state) {
  const int q = static_cast<int>(state.range(0));
  const IndexSet set = IndexSet::interval(q / 2 + 1, q, q);
  for (auto _ : state) benchmark::DoNotOptimize(psi(set));
}
BENCHMARK(BM_PsiInterval)->Arg(6)->Arg(12)->Arg(15);

static void BM_SolveSdp(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const int n = static_cast<int>(state.range(1));
  const Pencil p = random_pencil(m, n, 7, true).pencil;
  const Eigen::VectorXd c = Eigen::VectorXd::Ones(n);
  for (auto _ : state) benchmark::DoNotOptimize(solve_sdp(p, c));
}
BENCHMARK(BM_SolveSdp)->Args({3, 3})->Args({4, 6})->Args({8, 10});

static void BM_FitPentagon(benchmark::State& state) {
  const BoundaryCloud cloud = sample_polar_boundary(pentagon_fixture(), static_cast<int>(state.range(0)), 0);
  for (auto _ : state) benchmark::DoNotOptimize(fit_min_vanishing_degree(cloud, 6));
}
BENCHMARK(BM_FitPentagon)->Arg(200)->Arg(600);

static void BM_SamplePentagon(benchmark::State& state) {
  const Pencil p = pentagon_fixture();
  for (auto _ : state) benchmark::DoNotOptimize(sample_polar_boundary(p, 100, 0));
}
BENCHMARK(BM_SamplePentagon);

BENCHMARK_MAIN();
