#include <benchmark/benchmark.h>

#include "digitrec/eval.hpp"
#include "digitrec/mlp.hpp"

namespace {

using namespace digitrec;

void BM_Forward(benchmark::State& state) {
  TrainingConfig config;
  config.hidden_size = static_cast<int>(state.range(0));
  const MlpModel model = init_model(config);
  const std::vector<double> x(kFeatureCount, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(forward(model, x));
}
BENCHMARK(BM_Forward)->Arg(25)->Arg(65)->Arg(70);

void BM_Gradient(benchmark::State& state) {
  const MlpModel model = init_model(TrainingConfig{});
  const LabeledSample s{std::vector<double>(kFeatureCount, 0.5), 3};
  for (auto _ : state) benchmark::DoNotOptimize(gradient(model, s));
}
BENCHMARK(BM_Gradient);

void BM_TrainEpoch(benchmark::State& state) {
  const Dataset data = make_toy_dataset(static_cast<int>(state.range(0)), 0.05, 1);
  TrainingConfig config;
  config.max_epochs = 1;
  const MlpModel model = init_model(config);
  for (auto _ : state) benchmark::DoNotOptimize(train(model, data.samples, config));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(data.size()));
}
BENCHMARK(BM_TrainEpoch)->Arg(20)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace
