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


#ifndef GLEAK_ESTIMATION_H_
#define GLEAK_ESTIMATION_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "gleak/classifier.h"
#include "gleak/features.h"
#include "gleak/mlp.h"
#include "gleak/observable.h"
#include "gleak/preprocess.h"
#include "gleak/qif.h"
#include "gleak/sampling.h"

namespace gleak {

enum class EstimationMethod { kDataPreproc, kChannelPreproc, kFrequentist };
enum class LearnerKind { kKnn, kMlp, kNone };

std::string_view MethodName(EstimationMethod method);
absl::StatusOr<EstimationMethod> ParseMethod(std::string_view name);
std::string_view LearnerName(LearnerKind learner);
absl::StatusOr<LearnerKind> ParseLearner(std::string_view name);

struct LearnerConfig {
  LearnerKind kind = LearnerKind::kKnn;
  // k-NN ranking; its codec also feeds the network inputs.
  DistanceMetric metric;
  MlpConfig mlp;
  // Bound on the rationalization factor K and the largest scaled gain.
  std::uint64_t expansion_cap = 1'000'000;
};

// Seeds of every random phase of one estimate, for bit-exact replay.
struct EstimateSeeds {
  std::uint64_t master_seed = 0;
  std::uint64_t train_stream = 0;
  std::uint64_t validation_stream = 0;
  std::uint64_t learner_stream = 0;
};

struct EstimateReport {
  // Empirical vulnerability of the learned strategy on the validation pairs,
  // in the units of the original gain.
  double estimate = 0.0;
  EstimationMethod method = EstimationMethod::kDataPreproc;
  LearnerKind learner = LearnerKind::kNone;
  std::size_t m = 0;  // training pairs drawn
  std::size_t n = 0;  // validation pairs
  // Total weight the learner saw (m' for the data path).
  std::uint64_t training_weight = 0;
  std::uint64_t gain_scale = 1;  // K
  // Reported only; the channel path needs no explicit rescaling since the
  // functional evaluates the original gain.
  double beta = 1.0;
  EstimateSeeds seeds;
  double wall_seconds = 0.0;

  std::string ToJson() const;
};

// Trains the configured learner (k-NN or MLP) on weighted (w, y) data.
absl::StatusOr<std::unique_ptr<Classifier>> TrainLearner(
    const WeightedSampleSet& data, const LearnerConfig& config,
    std::uint64_t master_seed, std::uint64_t stream_id);

// A learned strategy with what is needed to report on it.
struct TrainedModel {
  std::shared_ptr<const Classifier> classifier;
  EstimationMethod method = EstimationMethod::kDataPreproc;
  LearnerKind learner = LearnerKind::kNone;
  std::size_t m = 0;
  std::uint64_t training_weight = 0;
  std::uint64_t gain_scale = 1;
  double beta = 1.0;
  EstimateSeeds seeds;
  double train_seconds = 0.0;
};

absl::StatusOr<TrainedModel> TrainDataPreproc(const SampleSet& train,
                                              const GainFunction& gain,
                                              const LearnerConfig& config,
                                              const EstimateSeeds& seeds);
absl::StatusOr<TrainedModel> TrainChannelPreproc(const Prior& prior,
                                                 const SamplingChannel& channel,
                                                 const GainFunction& gain,
                                                 std::size_t m,
                                                 const LearnerConfig& config,
                                                 const EstimateSeeds& seeds);
absl::StatusOr<TrainedModel> TrainFrequentist(const SampleSet& train,
                                              const GainFunction& gain,
                                              const EstimateSeeds& seeds = {});

// Empirical functional of the model on one validation set; wall time covers
// training plus this evaluation.
absl::StatusOr<EstimateReport> Evaluate(const TrainedModel& model,
                                        const SampleSet& validation,
                                        const GainFunction& gain);

// Rationalize, pre-process the (x, y) training pairs, train, then evaluate the
// empirical functional with the original gain on (x, y) validation pairs.
absl::StatusOr<EstimateReport> EstimateDataPreproc(const SampleSet& train,
                                                   const SampleSet& validation,
                                                   const GainFunction& gain,
                                                   const LearnerConfig& config,
                                                   const EstimateSeeds& seeds);

// Draws m pairs from tau ▷ RC through black-box access to the channel,
// trains, and evaluates like the data path.
absl::StatusOr<EstimateReport> EstimateChannelPreproc(
    const Prior& prior, const SamplingChannel& channel, const GainFunction& gain,
    std::size_t m, const SampleSet& validation, const LearnerConfig& config,
    const EstimateSeeds& seeds);

// Plug-in Bayes strategy from the training counts. Observables never seen in
// training get the best guess for the empirically most likely secret.
class FrequentistClassifier final : public Classifier {
 public:
  static absl::StatusOr<FrequentistClassifier> Fit(const SampleSet& train,
                                                   const GainFunction& gain);
  std::size_t Predict(const Observable& y) const override;
  std::size_t num_guesses() const override { return num_guesses_; }
  std::size_t fallback() const { return fallback_; }
  std::size_t size() const { return guesses_.size(); }

 private:
  std::unordered_map<Observable, std::size_t, ObservableHash> guesses_;
  std::size_t num_guesses_ = 0;
  std::size_t fallback_ = 0;
};

absl::StatusOr<EstimateReport> FrequentistEstimate(const SampleSet& train,
                                                   const SampleSet& validation,
                                                   const GainFunction& gain,
                                                   const EstimateSeeds& seeds = {});

// Majority vote over member predictions. Ties are broken uniformly at random
// by an RNG keyed on (master seed, stream, observable), so a prediction is a
// pure function of the observable.
class EnsembleClassifier final : public Classifier {
 public:
  static absl::StatusOr<EnsembleClassifier> Create(
      std::vector<std::shared_ptr<const Classifier>> members,
      std::uint64_t master_seed, std::uint64_t stream_id);
  std::size_t Predict(const Observable& y) const override;
  std::size_t num_guesses() const override { return num_guesses_; }
  std::size_t size() const { return members_.size(); }

 private:
  std::vector<std::shared_ptr<const Classifier>> members_;
  std::size_t num_guesses_ = 0;
  std::uint64_t master_seed_ = 0;
  std::uint64_t stream_id_ = 0;
};

// Empirical functional in original gain units, checked against the gain
// range; an out-of-range value is an internal error.
absl::StatusOr<double> BoundedEstimate(const Classifier& f,
                                       const SampleSet& validation,
                                       const GainFunction& gain);

}  // namespace gleak

#endif  // GLEAK_ESTIMATION_H_
