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


#include "gleak/estimation.h"

#include <cmath>
#include <memory>
#include <set>
#include <vector>

#include "gleak/knn.h"
#include "gleak/preprocess.h"
#include "gleak/qif.h"
#include "gleak/sampling.h"
#include "gleak/scenarios/geometric.h"
#include "gtest/gtest.h"
#include "json.hpp"

namespace gleak {
namespace {

Alphabet Ab(std::size_t n) { return Alphabet::Indexed(n); }

GainFunction MakeGain(Matrix m) {
  const auto rows = m.rows(), cols = m.cols();
  return *GainFunction::Create(Ab(rows), Ab(cols), std::move(m));
}

Channel MakeChannel(Matrix m) {
  const auto rows = m.rows(), cols = m.cols();
  return *Channel::Create(Ab(rows), Ab(cols), std::move(m));
}

SampleSet Pairs(std::size_t nx, std::vector<std::pair<std::size_t, int>> xy) {
  std::vector<LabeledSample> pairs;
  for (auto [x, y] : xy) pairs.push_back({x, Observable(y)});
  return *SampleSet::Create(Ab(nx), std::move(pairs));
}

LearnerConfig Knn() {
  LearnerConfig c;
  c.kind = LearnerKind::kKnn;
  c.metric = {MetricKind::kAbsoluteNumeric, *FeatureCodec::Uniform(1, 1.0)};
  return c;
}

LearnerConfig SmallMlp() {
  LearnerConfig c = Knn();
  c.kind = LearnerKind::kMlp;
  c.mlp.hidden = {16, 16};
  c.mlp.epochs = 60;
  c.mlp.batch_size = 100;
  c.mlp.learning_rate = 1e-2;
  return c;
}

// Predicts a fixed guess.
class ConstantClassifier final : public Classifier {
 public:
  ConstantClassifier(std::size_t guess, std::size_t num_guesses)
      : guess_(guess), num_guesses_(num_guesses) {}
  std::size_t Predict(const Observable&) const override { return guess_; }
  std::size_t num_guesses() const override { return num_guesses_; }

 private:
  std::size_t guess_;
  std::size_t num_guesses_;
};

// Predicts y mod num_guesses.
class ModClassifier final : public Classifier {
 public:
  explicit ModClassifier(std::size_t num_guesses) : num_guesses_(num_guesses) {}
  std::size_t Predict(const Observable& y) const override {
    return static_cast<std::size_t>(y[0]) % num_guesses_;
  }
  std::size_t num_guesses() const override { return num_guesses_; }

 private:
  std::size_t num_guesses_;
};

TEST(EstimationNamesTest, RoundTrip) {
  for (auto m : {EstimationMethod::kDataPreproc, EstimationMethod::kChannelPreproc,
                 EstimationMethod::kFrequentist}) {
    EXPECT_EQ(*ParseMethod(MethodName(m)), m);
  }
  for (auto l : {LearnerKind::kKnn, LearnerKind::kMlp, LearnerKind::kNone}) {
    EXPECT_EQ(*ParseLearner(LearnerName(l)), l);
  }
  EXPECT_FALSE(ParseMethod("bayes").ok());
  EXPECT_FALSE(ParseLearner("svm").ok());
}

TEST(DataPreprocEstimateTest, NoiselessIdentityIsOne) {
  const Channel c = MakeChannel(Matrix::Identity(2));
  const Prior pi = Prior::Uniform(Ab(2));
  const GainFunction g = GainFunction::Identity(Ab(2));
  MatrixChannelSampler sampler(c);
  auto train = SampleJoint(pi, sampler, 1000, 1, 1);
  auto valid = SampleJoint(pi, sampler, 1000, 1, 2);
  ASSERT_TRUE(train.ok() && valid.ok());
  for (const LearnerConfig& lc : {Knn(), SmallMlp()}) {
    auto r = EstimateDataPreproc(*train, *valid, g, lc, {1, 1, 2, 3});
    ASSERT_TRUE(r.ok()) << r.status();
    EXPECT_DOUBLE_EQ(r->estimate, 1.0);
    EXPECT_EQ(r->m, 1000u);
    EXPECT_EQ(r->n, 1000u);
    EXPECT_EQ(r->training_weight, 1000u);
    EXPECT_EQ(r->gain_scale, 1u);
  }
}

TEST(DataPreprocEstimateTest, RationalGainIsScaledForTrainingOnly) {
  const GainFunction g = MakeGain(Matrix{{0.5, 0.0}, {0.0, 0.25}});
  const SampleSet train = Pairs(2, {{0, 0}, {0, 0}, {1, 1}, {1, 1}});
  const SampleSet valid = Pairs(2, {{0, 0}, {1, 1}});
  auto r = EstimateDataPreproc(train, valid, g, Knn(), {});
  ASSERT_TRUE(r.ok()) << r.status();
  EXPECT_EQ(r->gain_scale, 4u);
  EXPECT_EQ(r->training_weight, 2u * 2u + 2u * 1u);
  EXPECT_DOUBLE_EQ(r->estimate, (0.5 + 0.25) / 2.0);
}

TEST(DataPreprocEstimateTest, ErrorsOnEmptySetsAndCap) {
  const GainFunction g = GainFunction::Identity(Ab(2));
  const SampleSet some = Pairs(2, {{0, 0}});
  const SampleSet none = *SampleSet::Create(Ab(2), {});
  EXPECT_FALSE(EstimateDataPreproc(none, some, g, Knn(), {}).ok());
  EXPECT_FALSE(EstimateDataPreproc(some, none, g, Knn(), {}).ok());
  LearnerConfig capped = Knn();
  capped.expansion_cap = 2;
  const GainFunction fine = MakeGain(Matrix{{1.0 / 7.0, 0.0}, {0.0, 1.0}});
  auto r = EstimateDataPreproc(some, some, fine, capped, {});
  EXPECT_FALSE(r.ok());
  LearnerConfig none_learner = Knn();
  none_learner.kind = LearnerKind::kNone;
  EXPECT_FALSE(EstimateDataPreproc(some, some, g, none_learner, {}).ok());
}

TEST(DataPreprocEstimateTest, KnnEstimateScalesWithGain) {
  auto s = MultiGuessScenario(GeometricChannelConfig::Desk());
  ASSERT_TRUE(s.ok());
  auto train = SampleJoint(s->prior, *s->channel, 3000, 4, 1);
  auto valid = SampleJoint(s->prior, *s->channel, 3000, 4, 2);
  ASSERT_TRUE(train.ok() && valid.ok());
  Matrix tripled = s->gain.matrix();
  for (std::size_t w = 0; w < tripled.rows(); ++w) {
    for (double& v : tripled.row(w)) v *= 3.0;
  }
  auto g3 = GainFunction::Create(s->gain.guesses(), s->gain.secrets(), tripled);
  ASSERT_TRUE(g3.ok());
  LearnerConfig lc = Knn();
  lc.metric = s->metric;
  auto a = EstimateDataPreproc(*train, *valid, s->gain, lc, {});
  auto b = EstimateDataPreproc(*train, *valid, *g3, lc, {});
  ASSERT_TRUE(a.ok() && b.ok());
  EXPECT_NEAR(b->estimate, 3.0 * a->estimate, 1e-12);
  EXPECT_EQ(a->training_weight, 9u * 3000u);
}

TEST(ChannelPreprocEstimateTest, IdentityGainReducesToBayesEstimation) {
  const Channel c = MakeChannel(Matrix{{0.8, 0.2}, {0.3, 0.7}});
  const Prior pi = *Prior::Create(Ab(2), {0.4, 0.6});
  const GainFunction g = GainFunction::Identity(Ab(2));
  MatrixChannelSampler sampler(c);
  auto valid = SampleJoint(pi, sampler, 20000, 2, 9);
  ASSERT_TRUE(valid.ok());
  auto r = EstimateChannelPreproc(pi, sampler, g, 5000, *valid, Knn(), {2, 8, 9, 10});
  ASSERT_TRUE(r.ok()) << r.status();
  EXPECT_DOUBLE_EQ(r->beta, 1.0);
  EXPECT_EQ(r->training_weight, 5000u);
  // Bayes strategy: y=0 -> 0 (0.32 vs 0.18), y=1 -> 1 (0.42 vs 0.08).
  double expected = 0.0;
  for (const auto& [x, y] : valid->pairs()) expected += (x == y.index());
  EXPECT_DOUBLE_EQ(r->estimate, expected / valid->size());
  EXPECT_NEAR(r->estimate, *PosteriorVulnerability(pi, c, g), 0.01);
}

TEST(ChannelPreprocEstimateTest, RejectsZeroBetaAndEmptyInputs) {
  const Channel c = MakeChannel(Matrix::Identity(2));
  const Prior pi = Prior::Uniform(Ab(2));
  MatrixChannelSampler sampler(c);
  const SampleSet valid = Pairs(2, {{0, 0}});
  const GainFunction zero = MakeGain(Matrix(2, 2, 0.0));
  EXPECT_FALSE(EstimateChannelPreproc(pi, sampler, zero, 10, valid, Knn(), {}).ok());
  const GainFunction id = GainFunction::Identity(Ab(2));
  EXPECT_FALSE(EstimateChannelPreproc(pi, sampler, id, 0, valid, Knn(), {}).ok());
}

TEST(ChannelPreprocEstimateTest, MultiGuessEstimateIsClose) {
  auto s = MultiGuessScenario(GeometricChannelConfig::Desk());
  ASSERT_TRUE(s.ok());
  auto valid = SampleJoint(s->prior, *s->channel, 10000, 5, 2);
  ASSERT_TRUE(valid.ok());
  LearnerConfig lc;
  lc.kind = LearnerKind::kMlp;
  lc.metric = s->metric;
  lc.mlp.epochs = 200;
  auto r = EstimateChannelPreproc(s->prior, *s->channel, s->gain, 10000, *valid, lc,
                                  {5, 1, 2, 3});
  ASSERT_TRUE(r.ok()) << r.status();
  EXPECT_NEAR(r->beta, 9.0, 1e-12);  // each secret is in 9 of 45 pairs
  EXPECT_LT(std::abs(r->estimate - s->exact_vulnerability) / s->exact_vulnerability,
            0.08);
}

TEST(FrequentistTest, ProportionalTrainingGivesExactBayesValue) {
  // Joint counts (x, y): (0,0)x3 (0,1)x1 (1,0)x1 (1,1)x2 (2,1)x3.
  const SampleSet train = Pairs(3, {{0, 0}, {0, 0}, {0, 0}, {0, 1}, {1, 0}, {1, 1},
                                    {1, 1}, {2, 1}, {2, 1}, {2, 1}});
  const GainFunction g = MakeGain(Matrix{{1, 1, 0}, {0, 1, 1}, {1, 0, 1}});
  auto r = FrequentistEstimate(train, train, g);
  ASSERT_TRUE(r.ok());
  // y=0: scores {4, 1, 3} -> w0; y=1: scores {3, 5, 4} -> w1.
  const Matrix joint{{0.3, 0.1}, {0.1, 0.2}, {0.0, 0.3}};
  const Prior pi = *Prior::Create(Ab(3), {0.4, 0.3, 0.3});
  Matrix rows(3, 2);
  for (std::size_t x = 0; x < 3; ++x) {
    for (std::size_t y = 0; y < 2; ++y) rows(x, y) = joint(x, y) / pi[x];
  }
  EXPECT_NEAR(r->estimate, *PosteriorVulnerability(pi, MakeChannel(rows), g), 1e-12);
  EXPECT_EQ(r->learner, LearnerKind::kNone);
}

TEST(FrequentistTest, UnseenObservablesUseFallbackGuess) {
  const SampleSet train = Pairs(3, {{2, 0}, {2, 0}, {1, 1}});
  const GainFunction g = MakeGain(Matrix{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  auto f = FrequentistClassifier::Fit(train, g);
  ASSERT_TRUE(f.ok());
  EXPECT_EQ(f->fallback(), 2u);
  const SampleSet valid = Pairs(3, {{2, 7}, {0, 8}, {2, 9}, {1, 10}});
  auto r = FrequentistEstimate(train, valid, g);
  ASSERT_TRUE(r.ok());
  EXPECT_DOUBLE_EQ(r->estimate, 0.5);
}

TEST(FrequentistTest, ScaledAndShiftedGains) {
  const SampleSet train = Pairs(2, {{0, 0}, {0, 0}, {1, 0}, {1, 1}, {0, 1}, {1, 1}});
  const SampleSet valid = Pairs(2, {{0, 0}, {1, 0}, {1, 1}, {0, 1}, {1, 1}});
  const GainFunction g = MakeGain(Matrix{{2, 0}, {0, 1}});
  const GainFunction g5 = MakeGain(Matrix{{10, 0}, {0, 5}});
  const GainFunction shifted = MakeGain(Matrix{{1, -1}, {-1, 0}});
  auto a = FrequentistEstimate(train, valid, g);
  auto b = FrequentistEstimate(train, valid, g5);
  auto c = FrequentistEstimate(train, valid, shifted);
  ASSERT_TRUE(a.ok() && b.ok() && c.ok());
  EXPECT_DOUBLE_EQ(b->estimate, 5.0 * a->estimate);
  EXPECT_NEAR(c->estimate, a->estimate - 1.0, 1e-15);
}

TEST(FrequentistTest, DegradesOnLargeObservableSpaces) {
  auto s = MultiGuessScenario(GeometricChannelConfig::Paper());
  ASSERT_TRUE(s.ok());
  auto train = SampleJoint(s->prior, *s->channel, 10000, 8, 1);
  auto valid = SampleJoint(s->prior, *s->channel, 10000, 8, 2);
  ASSERT_TRUE(train.ok() && valid.ok());
  auto freq = FrequentistEstimate(*train, *valid, s->gain);
  LearnerConfig lc = Knn();
  lc.metric = s->metric;
  auto knn = EstimateDataPreproc(*train, *valid, s->gain, lc, {});
  ASSERT_TRUE(freq.ok() && knn.ok());
  const double v = s->exact_vulnerability;
  EXPECT_GT(std::abs(freq->estimate - v), 2.0 * std::abs(knn->estimate - v));
}

TEST(EnsembleTest, SingleMemberAndMajority) {
  auto one = EnsembleClassifier::Create({std::make_shared<ModClassifier>(3)}, 1, 2);
  ASSERT_TRUE(one.ok());
  for (int y = 0; y < 20; ++y) EXPECT_EQ(one->Predict(Observable(y)), y % 3u);

  auto three = EnsembleClassifier::Create(
      {std::make_shared<ConstantClassifier>(1, 3), std::make_shared<ModClassifier>(3),
       std::make_shared<ConstantClassifier>(1, 3)},
      1, 2);
  ASSERT_TRUE(three.ok());
  for (int y = 0; y < 20; ++y) EXPECT_EQ(three->Predict(Observable(y)), 1u);
}

TEST(EnsembleTest, TiesAreRandomButReproducible) {
  auto tie = EnsembleClassifier::Create(
      {std::make_shared<ConstantClassifier>(0, 3), std::make_shared<ConstantClassifier>(2, 3)},
      7, 9);
  auto again = EnsembleClassifier::Create(
      {std::make_shared<ConstantClassifier>(0, 3), std::make_shared<ConstantClassifier>(2, 3)},
      7, 9);
  ASSERT_TRUE(tie.ok() && again.ok());
  std::set<std::size_t> seen;
  for (int y = 0; y < 200; ++y) {
    const std::size_t w = tie->Predict(Observable(y));
    EXPECT_TRUE(w == 0 || w == 2);
    EXPECT_EQ(w, tie->Predict(Observable(y)));
    EXPECT_EQ(w, again->Predict(Observable(y)));
    seen.insert(w);
  }
  EXPECT_EQ(seen.size(), 2u);
}

TEST(EnsembleTest, RejectsEmptyAndMismatched) {
  EXPECT_FALSE(EnsembleClassifier::Create({}, 0, 0).ok());
  EXPECT_FALSE(EnsembleClassifier::Create({std::make_shared<ModClassifier>(2),
                                           std::make_shared<ModClassifier>(3)},
                                          0, 0)
                   .ok());
}

TEST(EnsembleTest, OneStrongModelBeatsFiveWeakOnes) {
  auto s = MultiGuessScenario(GeometricChannelConfig::Desk());
  ASSERT_TRUE(s.ok());
  LearnerConfig lc = Knn();
  lc.metric = s->metric;
  auto valid = SampleJoint(s->prior, *s->channel, 50000, 3, 99);
  auto all = SampleJoint(s->prior, *s->channel, 50000, 3, 1);
  ASSERT_TRUE(valid.ok() && all.ok());
  std::vector<std::shared_ptr<const Classifier>> members;
  for (std::size_t part = 0; part < 5; ++part) {
    std::vector<LabeledSample> slice(all->pairs().begin() + part * 10000,
                                     all->pairs().begin() + (part + 1) * 10000);
    auto sub = SampleSet::Create(all->secrets(), std::move(slice));
    auto data = DataPreprocess(*sub, s->gain);
    auto f = TrainLearner(*data, lc, 3, part);
    ASSERT_TRUE(f.ok());
    members.push_back(std::shared_ptr<const Classifier>(std::move(*f)));
  }
  auto ensemble = EnsembleClassifier::Create(members, 3, 77);
  auto strong = TrainLearner(*DataPreprocess(*all, s->gain), lc, 3, 5);
  ASSERT_TRUE(ensemble.ok() && strong.ok());
  const double v = s->exact_vulnerability;
  const double e_ens = *BoundedEstimate(*ensemble, *valid, s->gain);
  const double e_one = *BoundedEstimate(**strong, *valid, s->gain);
  EXPECT_LT(std::abs(e_one - v), std::abs(e_ens - v));
}

TEST(PartitionGainTest, DataAndChannelPathsCoincide) {
  // Guess w covers secrets {2w, 2w+1}; every column has a single 1.
  Matrix gm(3, 6);
  for (std::size_t x = 0; x < 6; ++x) gm(x / 2, x) = 1.0;
  const GainFunction g = MakeGain(gm);
  Matrix cm(6, 4);
  for (std::size_t x = 0; x < 6; ++x) {
    for (std::size_t y = 0; y < 4; ++y) cm(x, y) = 1.0 + ((x + 2 * y) % 5);
    const double t = KahanTotal(cm.row(x));
    for (double& v : cm.row(x)) v /= t;
  }
  const Channel c = MakeChannel(cm);
  const Prior pi = *Prior::Create(Ab(6), {0.1, 0.2, 0.3, 0.05, 0.15, 0.2});
  MatrixChannelSampler sampler(c);
  auto train = SampleJoint(pi, sampler, 100000, 4, 1);
  ASSERT_TRUE(train.ok());
  auto data = DataPreprocess(*train, g);
  auto d = ChannelPreprocess(pi, g);
  ASSERT_TRUE(data.ok() && d.ok());
  auto chan = SampleChannelPreprocessed(*d, sampler, 100000, 4, 2);
  ASSERT_TRUE(chan.ok());
  EXPECT_LT(*TotalVariation(*data, *chan), 0.02);
}

TEST(EstimateReportTest, JsonHasAllFields) {
  EstimateReport r;
  r.estimate = 0.5;
  r.method = EstimationMethod::kChannelPreproc;
  r.learner = LearnerKind::kMlp;
  r.seeds = {1, 2, 3, 4};
  const auto j = nlohmann::json::parse(r.ToJson());
  EXPECT_EQ(j["method"], "channel-preproc");
  EXPECT_EQ(j["learner"], "mlp");
  EXPECT_EQ(j["seeds"]["learner_stream"], 4);
  for (const char* key : {"estimate", "m", "n", "training_weight", "gain_scale",
                          "beta", "wall_seconds"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
}

}  // namespace
}  // namespace gleak
