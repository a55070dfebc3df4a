#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "leuko/edges.hpp"
#include "leuko/fuzzy.hpp"
#include "leuko/pipeline.hpp"

#ifdef LEUKO_HAVE_FIXTURES
#include "fixtures.hpp"
#endif

using namespace leuko;

namespace {

GrayImage textured(int size) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> noise(0, 20);
  GrayImage g(size, size);
  const double c = size / 2.0;
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      const double r = std::hypot(x - c, y - c);
      g(x, y) = static_cast<std::uint8_t>((r < size / 3.0 ? 180 : 40) + noise(rng));
    }
  }
  return g;
}

void BM_Canny(benchmark::State& state) {
  const GrayImage g = textured(static_cast<int>(state.range(0)));
  const edges::CannyParams p;
  for (auto _ : state) benchmark::DoNotOptimize(edges::canny(g, p));
  state.SetItemsProcessed(state.iterations() * g.size());
}
BENCHMARK(BM_Canny)->Arg(128)->Arg(256)->Arg(512);

void BM_FuzzyEvaluate(benchmark::State& state) {
  const fuzzy::FuzzyModel model = fuzzy::default_model(fuzzy::Mode::standard);
  features::CellFeatures f;
  f.wbc_diameter_um = 16.92;
  f.nucleus_ratio = 0.53;
  f.granule_ratio = 0.41;
  for (auto _ : state) benchmark::DoNotOptimize(model.evaluate(f));
}
BENCHMARK(BM_FuzzyEvaluate);

#ifdef LEUKO_HAVE_FIXTURES
void BM_AnalyzeSingleCell(benchmark::State& state) {
  const RasterImage img = testing::render_smear(testing::single_cell(36, 0.5, 0.35));
  const harness::PipelineConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(harness::analyze(img, cfg));
}
BENCHMARK(BM_AnalyzeSingleCell)->Unit(benchmark::kMillisecond);
#endif

}  // namespace

BENCHMARK_MAIN();
