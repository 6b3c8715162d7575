#include <benchmark/benchmark.h>

#include "hullscope/boundary.hpp"
#include "hullscope/overparam.hpp"

using namespace hullscope;

static void BM_SingleProbe(benchmark::State& state) {
  Vector w(2);
  w << 1.0, 0.5;
  const auto clf = boundary::Classifier::linear(w, -0.3);
  Vector origin(2), dir(2);
  origin << -1.0, -1.0;
  dir << 1.0, 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(boundary::boundary_distance_along(clf, origin, dir, 100.0, 1e-9).distance);
  }
}
BENCHMARK(BM_SingleProbe);

static void BM_NearestLinear(benchmark::State& state) {
  const auto d = state.range(0);
  const auto clf = boundary::Classifier::linear(Vector::Ones(d), -1.0);
  boundary::NearestOptions o;
  o.n_directions = 1000;
  o.max_radius = 100.0;
  o.tol = 1e-9;
  o.refine_steps = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(boundary::nearest_boundary_estimate(clf, Vector::Zero(d), o).distance);
  }
}
BENCHMARK(BM_NearestLinear)->Args({2, 0})->Args({8, 0})->Args({8, 200})->Unit(benchmark::kMillisecond);

static void BM_NearestMlp(benchmark::State& state) {
  const auto model = overparam::Mlp::initialized({{2, 10, 1}, overparam::Activation::Tanh}, 1);
  const auto clf = overparam::as_classifier(model);
  boundary::NearestOptions o;
  o.n_directions = 200;
  o.max_radius = 10.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(boundary::nearest_boundary_estimate(clf, Vector::Zero(2), o).distance);
  }
}
BENCHMARK(BM_NearestMlp)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
