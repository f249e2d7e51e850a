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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "gleak/knn.h"
#include "gleak/rng.h"
#include "gleak/status_macros.h"
#include "json.hpp"
#include "string_compat.h"

namespace gleak {
namespace {

class Stopwatch {
 public:
  double Seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

constexpr std::pair<EstimationMethod, std::string_view> kMethods[] = {
    {EstimationMethod::kDataPreproc, "data-preproc"},
    {EstimationMethod::kChannelPreproc, "channel-preproc"},
    {EstimationMethod::kFrequentist, "frequentist"},
};

constexpr std::pair<LearnerKind, std::string_view> kLearners[] = {
    {LearnerKind::kKnn, "knn"},
    {LearnerKind::kMlp, "mlp"},
    {LearnerKind::kNone, "none"},
};

}  // namespace

std::string_view MethodName(EstimationMethod method) {
  for (const auto& [m, name] : kMethods) {
    if (m == method) return name;
  }
  return "unknown";
}

absl::StatusOr<EstimationMethod> ParseMethod(std::string_view name) {
  for (const auto& [m, n] : kMethods) {
    if (n == name) return m;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown estimation method '", internal::Av(name), "'"));
}

std::string_view LearnerName(LearnerKind learner) {
  for (const auto& [l, name] : kLearners) {
    if (l == learner) return name;
  }
  return "unknown";
}

absl::StatusOr<LearnerKind> ParseLearner(std::string_view name) {
  for (const auto& [l, n] : kLearners) {
    if (n == name) return l;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown learner '", internal::Av(name), "'"));
}

std::string EstimateReport::ToJson() const {
  nlohmann::ordered_json j;
  j["estimate"] = estimate;
  j["method"] = std::string(MethodName(method));
  j["learner"] = std::string(LearnerName(learner));
  j["m"] = m;
  j["n"] = n;
  j["training_weight"] = training_weight;
  j["gain_scale"] = gain_scale;
  j["beta"] = beta;
  j["seeds"] = {{"master", seeds.master_seed},
                {"train_stream", seeds.train_stream},
                {"validation_stream", seeds.validation_stream},
                {"learner_stream", seeds.learner_stream}};
  j["wall_seconds"] = wall_seconds;
  return j.dump(2);
}

absl::StatusOr<std::unique_ptr<Classifier>> TrainLearner(
    const WeightedSampleSet& data, const LearnerConfig& config,
    std::uint64_t master_seed, std::uint64_t stream_id) {
  switch (config.kind) {
    case LearnerKind::kKnn: {
      GLEAK_ASSIGN_OR_RETURN(KnnClassifier knn,
                             KnnClassifier::Train(data, config.metric));
      return std::make_unique<KnnClassifier>(std::move(knn));
    }
    case LearnerKind::kMlp: {
      GLEAK_ASSIGN_OR_RETURN(
          MlpClassifier mlp,
          MlpClassifier::Train(data, config.metric.codec, config.mlp,
                               master_seed, stream_id));
      return std::make_unique<MlpClassifier>(std::move(mlp));
    }
    case LearnerKind::kNone:
      break;
  }
  return absl::InvalidArgumentError("pre-processing paths need a learner");
}

absl::StatusOr<double> BoundedEstimate(const Classifier& f,
                                       const SampleSet& validation,
                                       const GainFunction& gain) {
  GLEAK_ASSIGN_OR_RETURN(double shifted, EmpiricalFunctional(f, validation, gain));
  // A mean of gain entries cannot leave their range beyond rounding.
  const double slack = 1e-12 * std::max(1.0, std::abs(gain.max()));
  if (shifted < gain.min() - slack || shifted > gain.max() + slack) {
    return absl::InternalError(absl::StrCat("estimate ", shifted,
                                            " outside the gain range [",
                                            gain.min(), ", ", gain.max(), "]"));
  }
  return shifted - gain.offset();
}

absl::StatusOr<TrainedModel> TrainDataPreproc(const SampleSet& train,
                                              const GainFunction& gain,
                                              const LearnerConfig& config,
                                              const EstimateSeeds& seeds) {
  const Stopwatch clock;
  if (train.empty()) return absl::InvalidArgumentError("training set is empty");
  GLEAK_ASSIGN_OR_RETURN(RationalizedGain scaled,
                         RationalizeGain(gain, config.expansion_cap));
  GLEAK_ASSIGN_OR_RETURN(WeightedSampleSet data, DataPreprocess(train, scaled.gain));
  if (data.empty()) {
    return absl::InvalidArgumentError(
        "pre-processing produced no training pairs (all gains zero)");
  }
  GLEAK_ASSIGN_OR_RETURN(
      std::unique_ptr<Classifier> f,
      TrainLearner(data, config, seeds.master_seed, seeds.learner_stream));
  TrainedModel model;
  model.classifier = std::move(f);
  model.method = EstimationMethod::kDataPreproc;
  model.learner = config.kind;
  model.m = train.size();
  model.training_weight = data.total_weight();
  model.gain_scale = scaled.scale;
  model.seeds = seeds;
  model.train_seconds = clock.Seconds();
  return model;
}

absl::StatusOr<TrainedModel> TrainChannelPreproc(const Prior& prior,
                                                 const SamplingChannel& channel,
                                                 const GainFunction& gain,
                                                 std::size_t m,
                                                 const LearnerConfig& config,
                                                 const EstimateSeeds& seeds) {
  const Stopwatch clock;
  if (m == 0) return absl::InvalidArgumentError("training size must be positive");
  GLEAK_ASSIGN_OR_RETURN(ChannelPreprocDerivation d, ChannelPreprocess(prior, gain));
  GLEAK_ASSIGN_OR_RETURN(
      WeightedSampleSet data,
      SampleChannelPreprocessed(d, channel, m, seeds.master_seed, seeds.train_stream));
  GLEAK_ASSIGN_OR_RETURN(
      std::unique_ptr<Classifier> f,
      TrainLearner(data, config, seeds.master_seed, seeds.learner_stream));
  TrainedModel model;
  model.classifier = std::move(f);
  model.method = EstimationMethod::kChannelPreproc;
  model.learner = config.kind;
  model.m = m;
  model.training_weight = data.total_weight();
  model.beta = d.beta;
  model.seeds = seeds;
  model.train_seconds = clock.Seconds();
  return model;
}

absl::StatusOr<TrainedModel> TrainFrequentist(const SampleSet& train,
                                              const GainFunction& gain,
                                              const EstimateSeeds& seeds) {
  const Stopwatch clock;
  GLEAK_ASSIGN_OR_RETURN(FrequentistClassifier f,
                         FrequentistClassifier::Fit(train, gain));
  TrainedModel model;
  model.classifier = std::make_shared<FrequentistClassifier>(std::move(f));
  model.method = EstimationMethod::kFrequentist;
  model.learner = LearnerKind::kNone;
  model.m = train.size();
  model.training_weight = train.size();
  model.seeds = seeds;
  model.train_seconds = clock.Seconds();
  return model;
}

absl::StatusOr<EstimateReport> Evaluate(const TrainedModel& model,
                                        const SampleSet& validation,
                                        const GainFunction& gain) {
  const Stopwatch clock;
  if (model.classifier == nullptr) {
    return absl::InvalidArgumentError("model has no classifier");
  }
  if (validation.empty()) return absl::InvalidArgumentError("validation set is empty");
  GLEAK_ASSIGN_OR_RETURN(double estimate,
                         BoundedEstimate(*model.classifier, validation, gain));
  EstimateReport r;
  r.estimate = estimate;
  r.method = model.method;
  r.learner = model.learner;
  r.m = model.m;
  r.n = validation.size();
  r.training_weight = model.training_weight;
  r.gain_scale = model.gain_scale;
  r.beta = model.beta;
  r.seeds = model.seeds;
  r.seeds.validation_stream = validation.provenance().stream_id;
  r.wall_seconds = model.train_seconds + clock.Seconds();
  return r;
}

absl::StatusOr<EstimateReport> EstimateDataPreproc(const SampleSet& train,
                                                   const SampleSet& validation,
                                                   const GainFunction& gain,
                                                   const LearnerConfig& config,
                                                   const EstimateSeeds& seeds) {
  if (validation.empty()) return absl::InvalidArgumentError("validation set is empty");
  GLEAK_ASSIGN_OR_RETURN(TrainedModel model,
                         TrainDataPreproc(train, gain, config, seeds));
  GLEAK_ASSIGN_OR_RETURN(EstimateReport r, Evaluate(model, validation, gain));
  r.seeds = seeds;
  return r;
}

absl::StatusOr<EstimateReport> EstimateChannelPreproc(
    const Prior& prior, const SamplingChannel& channel, const GainFunction& gain,
    std::size_t m, const SampleSet& validation, const LearnerConfig& config,
    const EstimateSeeds& seeds) {
  if (validation.empty()) return absl::InvalidArgumentError("validation set is empty");
  GLEAK_ASSIGN_OR_RETURN(TrainedModel model,
                         TrainChannelPreproc(prior, channel, gain, m, config, seeds));
  GLEAK_ASSIGN_OR_RETURN(EstimateReport r, Evaluate(model, validation, gain));
  r.seeds = seeds;
  return r;
}

absl::StatusOr<FrequentistClassifier> FrequentistClassifier::Fit(
    const SampleSet& train, const GainFunction& gain) {
  if (train.empty()) return absl::InvalidArgumentError("training set is empty");
  if (!(train.secrets() == gain.secrets())) {
    return absl::InvalidArgumentError("training/gain secret alphabets differ");
  }
  const std::size_t nx = gain.num_secrets();
  const std::size_t nw = gain.num_guesses();
  std::vector<double> secret_counts(nx, 0.0);
  std::unordered_map<Observable, std::vector<double>, ObservableHash> joint;
  for (const auto& [x, y] : train.pairs()) {
    secret_counts[x] += 1.0;
    auto [it, inserted] = joint.try_emplace(y);
    if (inserted) it->second.assign(nx, 0.0);
    it->second[x] += 1.0;
  }

  FrequentistClassifier f;
  f.num_guesses_ = nw;
  std::vector<double> scores(nw);
  // Counts stand in for the empirical joint; the common 1/m factor does not
  // move the argmax.
  for (const auto& [y, counts] : joint) {
    for (std::size_t w = 0; w < nw; ++w) {
      double s = 0.0;
      for (std::size_t x = 0; x < nx; ++x) s += counts[x] * gain(w, x);
      scores[w] = s;
    }
    f.guesses_.emplace(y, ArgmaxLowest(scores));
  }
  const std::size_t likely = ArgmaxLowest(secret_counts);
  for (std::size_t w = 0; w < nw; ++w) scores[w] = gain(w, likely);
  f.fallback_ = ArgmaxLowest(scores);
  return f;
}

std::size_t FrequentistClassifier::Predict(const Observable& y) const {
  auto it = guesses_.find(y);
  return it == guesses_.end() ? fallback_ : it->second;
}

absl::StatusOr<EstimateReport> FrequentistEstimate(const SampleSet& train,
                                                   const SampleSet& validation,
                                                   const GainFunction& gain,
                                                   const EstimateSeeds& seeds) {
  if (validation.empty()) return absl::InvalidArgumentError("validation set is empty");
  GLEAK_ASSIGN_OR_RETURN(TrainedModel model, TrainFrequentist(train, gain, seeds));
  GLEAK_ASSIGN_OR_RETURN(EstimateReport r, Evaluate(model, validation, gain));
  r.seeds = seeds;
  return r;
}

absl::StatusOr<EnsembleClassifier> EnsembleClassifier::Create(
    std::vector<std::shared_ptr<const Classifier>> members,
    std::uint64_t master_seed, std::uint64_t stream_id) {
  if (members.empty()) return absl::InvalidArgumentError("ensemble has no members");
  const std::size_t nw = members.front()->num_guesses();
  for (const auto& m : members) {
    if (m == nullptr || m->num_guesses() != nw) {
      return absl::InvalidArgumentError("ensemble members must share the guess alphabet");
    }
  }
  EnsembleClassifier e;
  e.members_ = std::move(members);
  e.num_guesses_ = nw;
  e.master_seed_ = master_seed;
  e.stream_id_ = stream_id;
  return e;
}

std::size_t EnsembleClassifier::Predict(const Observable& y) const {
  std::vector<std::size_t> votes(num_guesses_, 0);
  for (const auto& m : members_) ++votes[m->Predict(y)];
  const std::size_t top = *std::max_element(votes.begin(), votes.end());
  std::vector<std::size_t> tied;
  for (std::size_t w = 0; w < num_guesses_; ++w) {
    if (votes[w] == top) tied.push_back(w);
  }
  if (tied.size() == 1) return tied.front();
  Rng rng(master_seed_, StreamId({stream_id_, ObservableHash{}(y)}));
  return tied[rng.UniformIndex(tied.size())];
}

}  // namespace gleak
