#include <benchmark/benchmark.h>

#include <vector>

#include "nadeg/expint.hpp"

using namespace nadeg;

static void BM_ValuesSeparated(benchmark::State& state) {
  std::vector<long double> v;
  for (int i = 0; i <= state.range(0); ++i) v.push_back(0.7L * i - 1);
  for (auto _ : state) benchmark::DoNotOptimize(exp_integral_from_values(1.0L, v));
}
BENCHMARK(BM_ValuesSeparated)->DenseRange(1, 4);

static void BM_ValuesClustered(benchmark::State& state) {
  std::vector<long double> v;
  for (int i = 0; i <= state.range(0); ++i) v.push_back(0.5L + 1e-7L * i);
  for (auto _ : state) benchmark::DoNotOptimize(exp_integral_from_values(1.0L, v));
}
BENCHMARK(BM_ValuesClustered)->DenseRange(1, 4);

static void BM_SimplexRational(benchmark::State& state) {
  const Simplex s({{0, 0, 0}, {1, 0, 0}, {0, 2, 0}, {0, 0, 3}});
  const AffineForm l{{1, Rational(-1, 3), 2}, Rational(1, 2)};
  for (auto _ : state) benchmark::DoNotOptimize(simplex_exp_integral(s, l));
}
BENCHMARK(BM_SimplexRational);

static void BM_PLIntegral(benchmark::State& state) {
  const auto dom = RationalPolytope::from_vertices(2, {{-2, -1}, {3, -1}, {2, 2}, {-1, 3}, {-2, 1}});
  const auto g = PLConcaveFunction::min_of_affine(dom, {AffineForm{{1, 1}, 1}, AffineForm{{-1, 2}, 3}, AffineForm{{Rational(1, 2), -1}, 2}});
  set_thread_count(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(pl_integral(g, PLExponent{1, {0.2, 0.1}}));
  set_thread_count(1);
}
BENCHMARK(BM_PLIntegral)->Arg(1)->Arg(4);

BENCHMARK_MAIN();
