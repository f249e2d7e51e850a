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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <vector>

#include "gleak/features.h"
#include "gleak/knn.h"
#include "gleak/mlp.h"
#include "gleak/preprocess.h"
#include "gtest/gtest.h"

namespace gleak {
namespace {

Alphabet Ab(std::size_t n) { return Alphabet::Indexed(n); }

WeightedSampleSet Set(std::size_t nw, std::vector<WeightedSample> entries) {
  return *WeightedSampleSet::Create(Ab(nw), std::move(entries));
}

DistanceMetric Absolute() {
  return {MetricKind::kAbsoluteNumeric, *FeatureCodec::Uniform(1, 1.0)};
}

Observable Pt(std::int64_t a, std::int64_t b) {
  const std::int64_t v[] = {a, b};
  return *Observable::Tuple(v);
}

TEST(FeatureCodecTest, ScalesComponents) {
  const auto codec = *FeatureCodec::Create({10.0, 4.0});
  EXPECT_EQ(codec.Encode(Pt(5, 2)), (std::vector<double>{0.5, 0.5}));
  EXPECT_FALSE(FeatureCodec::Create({0.0}).ok());
  EXPECT_FALSE(FeatureCodec::Create({}).ok());
}

TEST(DistanceMetricTest, MetricAxiomsSpotCheck) {
  std::mt19937_64 gen(5);
  std::uniform_int_distribution<int> u(-20, 20);
  for (auto kind : {MetricKind::kAbsoluteNumeric, MetricKind::kEuclidean,
                    MetricKind::kManhattan}) {
    const DistanceMetric m{kind, *FeatureCodec::Uniform(2, 20.0)};
    for (int i = 0; i < 200; ++i) {
      const auto a = Pt(u(gen), u(gen));
      const auto b = Pt(u(gen), u(gen));
      EXPECT_GE(m.Distance(a, b), 0.0);
      EXPECT_EQ(m.Distance(a, b), m.Distance(b, a));
      EXPECT_EQ(m.Distance(a, a), 0.0);
      EXPECT_EQ(m.Distance(a, b) == 0.0, a == b);
      EXPECT_EQ(m.RankKey(a, b) == 0, a == b);
    }
  }
  const DistanceMetric e{MetricKind::kEuclidean, *FeatureCodec::Uniform(2, 1.0)};
  EXPECT_DOUBLE_EQ(e.Distance(Pt(0, 0), Pt(3, 4)), 5.0);
  EXPECT_EQ(e.RankKey(Pt(0, 0), Pt(3, 4)), 25u);
  const DistanceMetric l1{MetricKind::kManhattan, *FeatureCodec::Uniform(2, 1.0)};
  EXPECT_DOUBLE_EQ(l1.Distance(Pt(0, 0), Pt(3, -4)), 7.0);
}

TEST(KnnTest, NeighbourCountRule) {
  EXPECT_EQ(KnnNeighbourCount(1), 1u);
  EXPECT_EQ(KnnNeighbourCount(2), 1u);
  EXPECT_EQ(KnnNeighbourCount(7), 1u);
  EXPECT_EQ(KnnNeighbourCount(8), 2u);
  EXPECT_EQ(KnnNeighbourCount(20), 2u);
  EXPECT_EQ(KnnNeighbourCount(21), 3u);
  for (std::size_t l = 1; l < 100000; l = l * 3 + 1) {
    EXPECT_EQ(KnnNeighbourCount(l),
              std::max<std::size_t>(1, std::floor(std::log(static_cast<double>(l)))));
  }
}

TEST(KnnTest, SingleEntryPredictsEverywhere) {
  const auto knn = *KnnClassifier::Train(Set(2, {{1, Observable(0), 3}}), Absolute());
  EXPECT_EQ(knn.k(), 1u);
  EXPECT_EQ(knn.Predict(Observable(0)), 1u);
  EXPECT_EQ(knn.Predict(Observable(-100)), 1u);
  EXPECT_EQ(knn.Predict(Observable(1000)), 1u);
}

TEST(KnnTest, NearestNeighbourByHand) {
  const auto knn = *KnnClassifier::Train(
      Set(2, {{0, Observable(0), 3}, {1, Observable(0), 1},
              {1, Observable(10), 4}, {0, Observable(10), 1}}),
      Absolute());
  EXPECT_EQ(knn.size(), 2u);
  EXPECT_EQ(knn.k(), 1u);
  EXPECT_EQ(knn.Predict(Observable(2)), 0u);
  EXPECT_EQ(knn.Predict(Observable(8)), 1u);
}

TEST(KnnTest, VoteTieGoesToLowestGuess) {
  const auto knn = *KnnClassifier::Train(
      Set(3, {{2, Observable(4), 2}, {1, Observable(4), 2}}), Absolute());
  EXPECT_EQ(knn.Predict(Observable(4)), 1u);
}

TEST(KnnTest, EquidistantNeighboursAreAllIncluded) {
  // k = 1, but 3 and 7 are both at distance 2 from 5: both vote.
  const auto knn = *KnnClassifier::Train(
      Set(2, {{0, Observable(3), 2}, {1, Observable(7), 3}}), Absolute());
  ASSERT_EQ(knn.k(), 1u);
  EXPECT_EQ(knn.Predict(Observable(5)), 1u);
  EXPECT_EQ(knn.Predict(Observable(4)), 0u);
  const auto tied = *KnnClassifier::Train(
      Set(2, {{1, Observable(3), 2}, {0, Observable(7), 2}}), Absolute());
  EXPECT_EQ(tied.Predict(Observable(5)), 0u);
}

// Brute-force oracle: sort all indexed observables by distance, keep those
// within the k-th distance, add up their tallies.
std::size_t OracleVote(const KnnClassifier& knn, const DistanceMetric& metric,
                       const Observable& y) {
  std::vector<std::uint64_t> keys;
  for (const auto& o : knn.observables()) keys.push_back(metric.RankKey(y, o));
  std::vector<std::uint64_t> sorted = keys;
  std::sort(sorted.begin(), sorted.end());
  const std::uint64_t kth = sorted[std::min(knn.k(), sorted.size()) - 1];
  std::vector<std::uint64_t> votes(knn.num_guesses(), 0);
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (keys[i] > kth) continue;
    for (std::size_t w = 0; w < knn.num_guesses(); ++w) votes[w] += knn.tally(i, w);
  }
  std::size_t best = 0;
  for (std::size_t w = 1; w < votes.size(); ++w) {
    if (votes[w] > votes[best]) best = w;
  }
  return best;
}

TEST(KnnTest, ThreeObservablesWeightedVote) {
  // l = 3 gives k = 1; use l = 8 distinct to get k = 2 with three informative ones.
  std::vector<WeightedSample> entries{
      {0, Observable(0), 5}, {1, Observable(1), 3}, {1, Observable(2), 3},
      {2, Observable(2), 1}, {2, Observable(50), 1}, {2, Observable(60), 1},
      {2, Observable(70), 1}, {2, Observable(80), 1}, {2, Observable(90), 1}};
  const auto knn = *KnnClassifier::Train(Set(3, entries), Absolute());
  ASSERT_EQ(knn.k(), 2u);
  // Query 1: neighbours 1 (d=0) and {0, 2} tied at d=1 -> w0:5, w1:6, w2:1.
  EXPECT_EQ(knn.Predict(Observable(1)), 1u);
  // Query 0: neighbours 0 and 1 -> w0:5, w1:3.
  EXPECT_EQ(knn.Predict(Observable(0)), 0u);
  for (std::int64_t q = -5; q < 100; ++q) {
    EXPECT_EQ(knn.Predict(Observable(q)), OracleVote(knn, Absolute(), Observable(q)))
        << "query " << q;
  }
}

TEST(KnnTest, MatchesBruteForceOracleOnRandomFixtures) {
  std::mt19937_64 gen(99);
  std::uniform_int_distribution<int> coord(0, 6), guess(0, 3), weight(1, 4);
  for (int trial = 0; trial < 40; ++trial) {
    const bool scalar = trial % 2 == 0;
    std::vector<WeightedSample> entries;
    for (int i = 0; i < 30; ++i) {
      const auto y = scalar ? Observable(coord(gen)) : Pt(coord(gen), coord(gen));
      entries.push_back({static_cast<std::size_t>(guess(gen)), y,
                         static_cast<std::uint64_t>(weight(gen))});
    }
    for (auto kind : {MetricKind::kEuclidean, MetricKind::kManhattan}) {
      const DistanceMetric metric{kind, *FeatureCodec::Uniform(scalar ? 1 : 2, 7.0)};
      const auto knn = *KnnClassifier::Train(Set(4, entries), metric);
      for (int a = -2; a < 9; ++a) {
        for (int b = -2; b < (scalar ? -1 : 9); ++b) {
          const auto q = scalar ? Observable(a) : Pt(a, b);
          EXPECT_EQ(knn.Predict(q), OracleVote(knn, metric, q));
        }
      }
    }
  }
}

TEST(KnnTest, WeightEqualsDuplicates) {
  std::mt19937_64 gen(4);
  std::uniform_int_distribution<int> coord(0, 40), guess(0, 2), weight(1, 5);
  std::vector<WeightedSample> weighted, duplicated;
  for (int i = 0; i < 60; ++i) {
    const WeightedSample e{static_cast<std::size_t>(guess(gen)), Observable(coord(gen)),
                           static_cast<std::uint64_t>(weight(gen))};
    weighted.push_back(e);
    for (std::uint64_t c = 0; c < e.weight; ++c) duplicated.push_back({e.guess, e.observable, 1});
  }
  const auto a = *KnnClassifier::Train(Set(3, weighted), Absolute());
  const auto b = *KnnClassifier::Train(Set(3, duplicated), Absolute());
  ASSERT_EQ(a.observables(), b.observables());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t w = 0; w < 3; ++w) EXPECT_EQ(a.tally(i, w), b.tally(i, w));
  }
  for (int q = -3; q < 45; ++q) EXPECT_EQ(a.Predict(Observable(q)), b.Predict(Observable(q)));
}

TEST(KnnTest, RejectsEmptyData) {
  EXPECT_FALSE(KnnClassifier::Train(Set(2, {}), Absolute()).ok());
}

TEST(MlpConfigTest, Validation) {
  MlpConfig defaults;
  EXPECT_TRUE(defaults.Validate().ok());
  EXPECT_EQ(defaults.hidden, (std::vector<std::size_t>{100, 100, 100}));
  EXPECT_EQ(defaults.epochs, 700u);
  EXPECT_EQ(defaults.batch_size, 1000u);
  MlpConfig zero = defaults;
  zero.hidden = {100, 0};
  EXPECT_FALSE(zero.Validate().ok());
  MlpConfig bad = defaults;
  bad.epochs = 0;
  EXPECT_FALSE(bad.Validate().ok());
  bad = defaults;
  bad.batch_size = 0;
  EXPECT_FALSE(bad.Validate().ok());
  bad = defaults;
  bad.learning_rate = 0;
  EXPECT_FALSE(bad.Validate().ok());
}

TrainingBatch RandomBatch(std::mt19937_64& gen, std::size_t in, std::size_t out,
                          std::size_t n) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> u(0.1, 1.0);
  TrainingBatch b;
  b.features.resize(in, n);
  b.targets.resize(out, n);
  b.weights.resize(n);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t r = 0; r < in; ++r) b.features(r, c) = normal(gen);
    double total = 0;
    for (std::size_t r = 0; r < out; ++r) total += b.targets(r, c) = u(gen);
    b.targets.col(c) /= total;
    b.weights(c) = u(gen) * 3;
  }
  return b;
}

TEST(MlpGradientTest, SingleHiddenUnitSingleSample) {
  std::mt19937_64 gen(1);
  Rng rng(1, 1);
  const auto net = *MlpNetwork::Create(1, {1}, 2, rng);
  EXPECT_LE(net.num_parameters(), 20u);
  EXPECT_LE(GradientCheck(net, RandomBatch(gen, 1, 2, 1)), 1e-4);
}

TEST(MlpGradientTest, RandomSmallArchitectures) {
  std::mt19937_64 gen(2);
  std::uniform_int_distribution<std::size_t> width(1, 3);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed, 7);
    const std::size_t in = width(gen), out = width(gen) + 1;
    std::vector<std::size_t> hidden{width(gen)};
    if (seed % 2) hidden.push_back(width(gen));
    auto net = *MlpNetwork::Create(in, hidden, out, rng);
    ASSERT_LE(net.num_parameters(), 40u);
    // Non-zero biases keep pre-activations off the ReLU kink.
    std::normal_distribution<double> normal;
    std::vector<double> params(net.num_parameters());
    for (double& p : params) p = normal(gen);
    net.SetFlatParameters(params);
    EXPECT_LE(GradientCheck(net, RandomBatch(gen, in, out, 4)), 1e-4) << "seed " << seed;
  }
}

TEST(MlpGradientTest, ZeroNetworkOnUniformLabels) {
  Rng rng(3, 3);
  auto net = *MlpNetwork::Create(2, {3}, 3, rng);
  net.SetFlatParameters(std::vector<double>(net.num_parameters(), 0.0));
  TrainingBatch b;
  b.features = Eigen::MatrixXd::Ones(2, 3);
  b.targets = Eigen::MatrixXd::Constant(3, 3, 1.0 / 3.0);
  b.weights = Eigen::VectorXd::Ones(3);
  std::vector<double> grad;
  net.LossAndGradient(b, grad);
  for (double g : grad) EXPECT_NEAR(g, 0.0, 1e-15);
}

TEST(MlpTest, LearnsSeparableToySet) {
  const auto data = Set(2, {{0, Observable(0), 10}, {1, Observable(9), 10}});
  MlpConfig config;
  config.hidden = {8};
  config.learning_rate = 1e-2;
  config.epochs = 200;
  config.batch_size = 2;
  const auto model = *MlpClassifier::Train(data, *FeatureCodec::Uniform(1, 10.0), config, 1, 2);
  EXPECT_EQ(model.Predict(Observable(0)), 0u);
  EXPECT_EQ(model.Predict(Observable(9)), 1u);
  ASSERT_EQ(model.epoch_losses().size(), 200u);
  EXPECT_LE(model.epoch_losses().back(), model.epoch_losses().front());
}

TEST(MlpTest, PredictionRules) {
  Rng rng(0, 0);
  auto net = *MlpNetwork::Create(1, {2}, 2, rng);
  net.SetFlatParameters(std::vector<double>(net.num_parameters(), 0.0));
  auto tie = MlpClassifier::FromNetwork(net, *FeatureCodec::Uniform(1, 1.0));
  EXPECT_EQ(tie.Probabilities(Observable(3)), (std::vector<double>{0.5, 0.5}));
  EXPECT_EQ(tie.Predict(Observable(3)), 0u);

  net.mutable_bias(1)(1) = std::log(9.0);  // softmax (0.1, 0.9)
  const auto skewed = MlpClassifier::FromNetwork(net, *FeatureCodec::Uniform(1, 1.0));
  EXPECT_NEAR(skewed.Probabilities(Observable(0))[1], 0.9, 1e-15);
  EXPECT_EQ(skewed.Predict(Observable(0)), 1u);

  Rng r2(5, 5);
  auto random = *MlpNetwork::Create(1, {4, 4}, 5, r2);
  auto shifted = random;
  shifted.mutable_bias(2).array() += 123.0;
  const auto a = MlpClassifier::FromNetwork(random, *FeatureCodec::Uniform(1, 4.0));
  const auto b = MlpClassifier::FromNetwork(shifted, *FeatureCodec::Uniform(1, 4.0));
  for (int y = -10; y <= 10; ++y) {
    EXPECT_EQ(a.Predict(Observable(y)), b.Predict(Observable(y)));
    const auto p = a.Probabilities(Observable(y));
    EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-6);
  }
}

WeightedSampleSet NoisyData(std::uint64_t seed, bool duplicate) {
  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<int> coord(0, 30), guess(0, 2), weight(1, 4);
  std::vector<WeightedSample> entries;
  for (int i = 0; i < 80; ++i) {
    const WeightedSample e{static_cast<std::size_t>(guess(gen)), Observable(coord(gen)),
                           static_cast<std::uint64_t>(weight(gen))};
    if (!duplicate) {
      entries.push_back(e);
    } else {
      for (std::uint64_t c = 0; c < e.weight; ++c) entries.push_back({e.guess, e.observable, 1});
    }
  }
  return Set(3, entries);
}

TEST(MlpTest, DeterministicAndWeightEquivalent) {
  MlpConfig config;
  config.hidden = {6, 6};
  config.epochs = 30;
  config.batch_size = 5;
  const auto codec = *FeatureCodec::Uniform(1, 30.0);
  const auto a = *MlpClassifier::Train(NoisyData(1, false), codec, config, 9, 4);
  const auto b = *MlpClassifier::Train(NoisyData(1, false), codec, config, 9, 4);
  const auto c = *MlpClassifier::Train(NoisyData(1, true), codec, config, 9, 4);
  EXPECT_EQ(a.network().FlatParameters(), b.network().FlatParameters());
  EXPECT_EQ(a.network().FlatParameters(), c.network().FlatParameters());
  const auto d = *MlpClassifier::Train(NoisyData(1, false), codec, config, 9, 5);
  EXPECT_NE(a.network().FlatParameters(), d.network().FlatParameters());
}

TEST(MlpTest, ExportImportRoundTrip) {
  MlpConfig config;
  config.hidden = {5, 3};
  config.epochs = 5;
  config.batch_size = 4;
  const auto model = *MlpClassifier::Train(NoisyData(2, false),
                                           *FeatureCodec::Uniform(1, 30.0), config, 1, 1);
  std::stringstream ss;
  model.Export(ss);
  EXPECT_EQ(ss.str().rfind("gleak-mlp 1\n", 0), 0u);
  const auto back = *MlpClassifier::Import(ss);
  EXPECT_EQ(back.network().FlatParameters(), model.network().FlatParameters());
  EXPECT_EQ(back.codec().scales(), model.codec().scales());
  std::stringstream bad("gleak-mlp 2\n");
  EXPECT_FALSE(MlpClassifier::Import(bad).ok());
}

}  // namespace
}  // namespace gleak
