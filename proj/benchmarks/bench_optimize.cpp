#include <benchmark/benchmark.h>

#include "nadeg/optimize.hpp"

using namespace nadeg;

static void BM_SolitonInterval(benchmark::State& state) {
  const auto p = RationalPolytope::interval(-1, 2);
  for (auto _ : state) benchmark::DoNotOptimize(soliton_vector(p, 1));
}
BENCHMARK(BM_SolitonInterval);

static void BM_SolitonPolygon(benchmark::State& state) {
  const auto p = RationalPolytope::from_vertices(2, {{-1, -1}, {3, -1}, {2, 1}, {-1, 2}});
  for (auto _ : state) benchmark::DoNotOptimize(soliton_vector(p, 2));
}
BENCHMARK(BM_SolitonPolygon);

static void BM_RescaleUniform(benchmark::State& state) {
  const auto mu = DHMeasure::uniform(0, 4);
  for (auto _ : state) benchmark::DoNotOptimize(rescale_opt(1, mu));
}
BENCHMARK(BM_RescaleUniform);

BENCHMARK_MAIN();
