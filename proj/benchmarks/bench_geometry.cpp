#include <benchmark/benchmark.h>

#include "nadeg/geometry.hpp"

using namespace nadeg;

static void BM_TriangulateBox(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto box = RationalPolytope::box(RVector(static_cast<size_t>(n), Rational(-1)), RVector(static_cast<size_t>(n), Rational(1)));
  for (auto _ : state) benchmark::DoNotOptimize(triangulate(box));
}
BENCHMARK(BM_TriangulateBox)->DenseRange(2, 4);

static void BM_HullFromVertices(benchmark::State& state) {
  std::vector<RVector> pts;
  for (int i = 0; i < state.range(0); ++i) pts.push_back({Rational(i * i % 17 - 8), Rational(i * 7 % 13 - 6), Rational(i * 5 % 11 - 5)});
  for (auto _ : state) benchmark::DoNotOptimize(RationalPolytope::from_vertices(3, pts));
}
BENCHMARK(BM_HullFromVertices)->Arg(8)->Arg(16)->Arg(32);

static void BM_Volume(benchmark::State& state) {
  const auto p = RationalPolytope::from_vertices(3, {{0, 0, 0}, {2, 0, 0}, {0, 3, 0}, {0, 0, 1}, {2, 3, 1}, {1, 1, 2}});
  for (auto _ : state) benchmark::DoNotOptimize(volume(p));
}
BENCHMARK(BM_Volume);

BENCHMARK_MAIN();
