#include <benchmark/benchmark.h>

#include "hullscope/hull.hpp"

using namespace hullscope;

static void BM_ProjectGaussian(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto d = static_cast<std::size_t>(state.range(1));
  const Matrix train = standard_normal(n, d, 1).points();
  const Vector query = standard_normal(1, d, 2).point(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(hull::project_onto_hull(query, train).distance);
  }
}
BENCHMARK(BM_ProjectGaussian)->Args({50, 2})->Args({200, 8})->Args({200, 64})->Args({1000, 64});

static void BM_ProjectInterior(benchmark::State& state) {
  const Matrix train = standard_normal(200, 4, 1).points();
  const Vector centre = train.colwise().mean().transpose();
  for (auto _ : state) {
    benchmark::DoNotOptimize(hull::membership(centre, train).distance);
  }
}
BENCHMARK(BM_ProjectInterior);

static void BM_ExtrapolationReport(benchmark::State& state) {
  const auto train = standard_normal(200, 64, 1);
  const auto test = standard_normal(100, 64, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(hull::extrapolation_report(train, test).fraction_outside);
  }
}
BENCHMARK(BM_ExtrapolationReport)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
