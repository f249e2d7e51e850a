// Copyright 2026 The gleak Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <cstdint>
#include <memory>
#include <optional>

#include "benchmark/benchmark.h"
#include "gleak/estimation.h"
#include "gleak/harness/config.h"
#include "gleak/knn.h"
#include "gleak/mlp.h"
#include "gleak/preprocess.h"
#include "gleak/qif.h"
#include "gleak/rng.h"
#include "gleak/sampling.h"

namespace gleak {
namespace {

ScenarioInstance MultiGuess(const char* profile) {
  return *BuildScenario(*ProfileConfig("multi-guess", profile));
}

WeightedSampleSet Preprocessed(const ScenarioInstance& s, std::size_t m) {
  const SampleSet train = *SampleJoint(s.prior, *s.channel, m, 1, 1);
  return *DataPreprocess(train, s.gain);
}

void BM_PosteriorVulnerability(benchmark::State& state) {
  const ScenarioInstance s = MultiGuess("paper");
  for (auto _ : state) {
    benchmark::DoNotOptimize(*PosteriorVulnerability(s.prior, *s.matrix, s.gain));
  }
  state.SetLabel("10 x 16000, 45 guesses");
}
BENCHMARK(BM_PosteriorVulnerability)->Unit(benchmark::kMillisecond);

void BM_SampleJoint(benchmark::State& state) {
  const ScenarioInstance s = MultiGuess("desk");
  const auto n = static_cast<std::size_t>(state.range(0));
  std::uint64_t stream = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(SampleJoint(s.prior, *s.channel, n, 1, ++stream));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleJoint)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_DataPreprocess(benchmark::State& state) {
  const ScenarioInstance s = MultiGuess("desk");
  const SampleSet train =
      *SampleJoint(s.prior, *s.channel, static_cast<std::size_t>(state.range(0)), 1, 1);
  for (auto _ : state) benchmark::DoNotOptimize(DataPreprocess(train, s.gain));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DataPreprocess)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_KnnPredict(benchmark::State& state) {
  const ScenarioInstance s = MultiGuess("desk");
  const KnnClassifier knn =
      *KnnClassifier::Train(Preprocessed(s, static_cast<std::size_t>(state.range(0))),
                            s.metric);
  const SampleSet queries = *SampleJoint(s.prior, *s.channel, 10000, 2, 2);
  for (auto _ : state) {
    for (const auto& p : queries.pairs()) benchmark::DoNotOptimize(knn.Predict(p.observable));
  }
  state.SetItemsProcessed(state.iterations() * queries.size());
}
BENCHMARK(BM_KnnPredict)->Arg(2000)->Arg(30000)->Unit(benchmark::kMillisecond);

void BM_MlpEpoch(benchmark::State& state) {
  const ScenarioInstance s = MultiGuess("desk");
  const WeightedSampleSet data = Preprocessed(s, static_cast<std::size_t>(state.range(0)));
  MlpConfig config;
  config.epochs = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(MlpClassifier::Train(data, s.metric.codec, config, 1, 1));
  }
  state.SetItemsProcessed(state.iterations() * data.total_weight());
  state.SetLabel("100x3 hidden, batch 1000");
}
BENCHMARK(BM_MlpEpoch)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace gleak

BENCHMARK_MAIN();
