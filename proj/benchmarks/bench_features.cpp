#include <benchmark/benchmark.h>

#include "digitrec/eval.hpp"
#include "digitrec/features.hpp"
#include "digitrec/pgm.hpp"

namespace {

using namespace digitrec;

void BM_ExtractFeatures(benchmark::State& state) {
  const BinaryImage img = render_glyph(static_cast<int>(state.range(0)), 0, 0);
  for (auto _ : state) benchmark::DoNotOptimize(extract_features(img));
}
BENCHMARK(BM_ExtractFeatures)->DenseRange(0, 9, 3);

void BM_LongestRunFeatures(benchmark::State& state) {
  const BinaryImage img = render_glyph(8, 0, 0);
  for (auto _ : state) benchmark::DoNotOptimize(longest_run_features(img));
}
BENCHMARK(BM_LongestRunFeatures);

void BM_NormalizeImage(benchmark::State& state) {
  const GrayImage gray = to_gray(render_glyph(4, 1, -1));
  for (auto _ : state) benchmark::DoNotOptimize(normalize_image(gray, ThresholdOptions{}));
}
BENCHMARK(BM_NormalizeImage);

}  // namespace
