#include <benchmark/benchmark.h>

#include "hullscope/polyclass.hpp"

using namespace hullscope;

static void BM_DesignMatrix(benchmark::State& state) {
  const int degree = static_cast<int>(state.range(0));
  const auto shape = poly::PolynomialSurface::zero(Box(-1, 1, 2), degree);
  const Matrix pts = uniform_box(1000, Box(-1, 1, 2), 3).points();
  for (auto _ : state) {
    benchmark::DoNotOptimize(shape.design_matrix(pts).data());
  }
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_DesignMatrix)->DenseRange(2, 10, 4);

static void BM_FitSeparator(benchmark::State& state) {
  const auto data = xor_dataset(50, 0.1, 1);
  const Matrix x = data.points_with_label(0), y = data.points_with_label(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(poly::fit_separator(x, y, static_cast<int>(state.range(0))).misclassified);
  }
}
BENCHMARK(BM_FitSeparator)->Arg(2)->Arg(6);

static void BM_ExtensionFamily(benchmark::State& state) {
  Vector a(2), b(2);
  a << -1.0, 0.0;
  b << 1.0, 0.0;
  const auto data = gaussian_blobs(50, 2, {a, b}, 0.3, 7);
  const Box box(-4, 4, 2);
  const auto f = poly::fit_separator(data.points_with_label(0), data.points_with_label(1), 2, poly::kDefaultRidge, box)
                     .surface;
  poly::AnchorSet anchors;
  anchors.points.resize(4, 2);
  anchors.points << -4, -4, 4, -4, -4, 4, 4, 4;
  anchors.targets.resize(4);
  anchors.targets << 1, -1, -1, 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(poly::extension_family(f, 6, 10, data.points(), anchors, 1e-3, 1).all_distinct);
  }
}
BENCHMARK(BM_ExtensionFamily)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
