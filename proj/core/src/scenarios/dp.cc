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


#include "gleak/scenarios/dp.h"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "gleak/features.h"
#include "gleak/observable.h"
#include "gleak/rng.h"
#include "gleak/sampling.h"
#include "gleak/status_macros.h"

namespace gleak {
namespace {

Alphabet DatabaseAlphabet() { return *Alphabet::Create({"full", "minus"}); }

// Two-sided geometric pmf lambda exp(-nu |k|).
double NoisePmf(double nu, std::int64_t k) {
  if (std::isinf(nu)) return k == 0 ? 1.0 : 0.0;
  const double lambda = std::tanh(nu / 2.0);
  return lambda * std::exp(-nu * std::abs(static_cast<double>(k)));
}

// Offset of the differing coordinate under each secret.
constexpr std::array<std::int64_t, 2> kShift = {0, -1};

std::size_t BayesGuess(const Prior& prior, const GainFunction& gain, double nu,
                       std::int64_t t, std::vector<double>& scores) {
  const std::array<double, 2> joint = {prior[0] * NoisePmf(nu, t - kShift[0]),
                                       prior[1] * NoisePmf(nu, t - kShift[1])};
  for (std::size_t w = 0; w < gain.num_guesses(); ++w) {
    scores[w] = joint[0] * gain(w, 0) + joint[1] * gain(w, 1);
  }
  return ArgmaxLowest(scores);
}

absl::Status CheckShapes(const Prior& prior, const GainFunction& gain) {
  if (prior.size() != 2 || gain.num_secrets() != 2) {
    return absl::InvalidArgumentError(
        "the adjacent-database scenario has exactly two secrets");
  }
  return absl::OkStatus();
}

}  // namespace

absl::Status DpScenarioConfig::Validate() const {
  for (std::int64_t c : counts) {
    if (c < 0) return absl::InvalidArgumentError("label counts must be >= 0");
  }
  if (removed_label >= kSeverityClasses) {
    return absl::InvalidArgumentError(
        absl::StrCat("removed label ", removed_label, " is not in 0..4"));
  }
  if (counts[removed_label] == 0) {
    return absl::InvalidArgumentError(absl::StrCat(
        "no record with label ", removed_label, " to remove"));
  }
  if (!(nu > 0.0)) return absl::InvalidArgumentError("nu must be positive");
  if (!(tail_mass > 0.0 && tail_mass < 1.0)) {
    return absl::InvalidArgumentError("tail mass must be in (0, 1)");
  }
  return absl::OkStatus();
}

absl::StatusOr<LabelCounts> ReadSeverityHistogram(std::istream& in,
                                                  std::size_t severity_column) {
  LabelCounts counts{};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::istringstream fields(line);
    std::string field;
    for (std::size_t i = 0; i <= severity_column; ++i) {
      if (!std::getline(fields, field, ',')) {
        return absl::InvalidArgumentError(absl::StrCat(
            "line ", line_no, " has no column ", severity_column));
      }
    }
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (end == field.c_str() || *end != '\0' || v != std::floor(v) || v < 0.0 ||
        v >= static_cast<double>(kSeverityClasses)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "line ", line_no, ": severity '", field, "' is not a label in 0..4"));
    }
    ++counts[static_cast<std::size_t>(v)];
  }
  if (in.bad()) return absl::DataLossError("error reading severity data");
  return counts;
}

absl::StatusOr<LabelCounts> ReadSeverityHistogramFile(const std::string& path,
                                                      std::size_t severity_column) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  return ReadSeverityHistogram(in, severity_column);
}

absl::StatusOr<GainFunction> DpGain(const DpScenarioConfig& config) {
  GLEAK_RETURN_IF_ERROR(config.Validate());
  const double present = config.removed_label >= 3 ? 2.0 : 1.0;
  const Alphabet dbs = DatabaseAlphabet();
  return GainFunction::Create(dbs, dbs, Matrix{{present, 0.0}, {0.0, 1.0}});
}

std::int64_t DpTruncationRadius(double nu, double tail_mass) {
  if (std::isinf(nu)) return 0;
  // P(|N| > R) = 2 exp(-nu R) / (e^nu + 1).
  const double r = std::log(2.0 / (tail_mass * (std::exp(nu) + 1.0))) / nu;
  return std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor(r)) + 1);
}

absl::StatusOr<double> DpExactVulnerability(const DpScenarioConfig& config,
                                            const Prior& prior,
                                            const GainFunction& gain) {
  GLEAK_RETURN_IF_ERROR(config.Validate());
  GLEAK_RETURN_IF_ERROR(CheckShapes(prior, gain));
  const std::int64_t radius = DpTruncationRadius(config.nu, config.tail_mass);
  std::vector<double> scores(gain.num_guesses());
  KahanSum total;
  for (std::int64_t t = kShift[1] - radius; t <= kShift[0] + radius; ++t) {
    const std::size_t w = BayesGuess(prior, gain, config.nu, t, scores);
    total.Add(scores[w]);
  }
  return total.value();
}

absl::StatusOr<MonteCarloEstimate> DpMonteCarloVulnerability(
    const DpScenarioConfig& config, const Prior& prior, const GainFunction& gain,
    std::size_t samples, std::uint64_t master_seed) {
  GLEAK_RETURN_IF_ERROR(CheckShapes(prior, gain));
  if (samples < 2) return absl::InvalidArgumentError("need at least 2 samples");
  GLEAK_ASSIGN_OR_RETURN(ScenarioInstance scenario, DpScenario(config));
  Rng rng(master_seed, StreamTag("dp-monte-carlo"));
  CategoricalSampler secrets(prior.probs());
  std::vector<double> scores(gain.num_guesses());
  KahanSum sum;
  KahanSum sum_sq;
  for (std::size_t s = 0; s < samples; ++s) {
    const std::size_t x = secrets.Sample(rng);
    const Observable y = scenario.channel->Sample(x, rng);
    const std::size_t w =
        BayesGuess(prior, gain, config.nu, y[config.removed_label], scores);
    const double g = gain(w, x);
    sum.Add(g);
    sum_sq.Add(g * g);
  }
  const double n = static_cast<double>(samples);
  const double mean = sum.value() / n;
  const double var = std::max(0.0, (sum_sq.value() - n * mean * mean) / (n - 1.0));
  return MonteCarloEstimate{mean, std::sqrt(var / n)};
}

absl::StatusOr<ScenarioInstance> DpScenario(const DpScenarioConfig& config) {
  GLEAK_RETURN_IF_ERROR(config.Validate());
  GLEAK_ASSIGN_OR_RETURN(GainFunction gain, DpGain(config));
  Prior prior = Prior::Uniform(DatabaseAlphabet());
  GLEAK_ASSIGN_OR_RETURN(double exact, DpExactVulnerability(config, prior, gain));

  const double nu = config.nu;
  const std::size_t removed = config.removed_label;
  auto sampler = std::make_shared<GenerativeChannel>(
      prior.alphabet(), kSeverityClasses,
      [nu, removed](std::size_t x, Rng& rng) {
        std::array<std::int64_t, kSeverityClasses> released{};
        for (std::size_t i = 0; i < kSeverityClasses; ++i) {
          released[i] = rng.TwoSidedGeometric(nu);
        }
        released[removed] += kShift[x];
        return *Observable::Tuple(released);
      });
  GLEAK_ASSIGN_OR_RETURN(FeatureCodec codec,
                         FeatureCodec::Uniform(kSeverityClasses, 1.0));
  return ScenarioInstance{
      .id = "dp",
      .prior = std::move(prior),
      .channel = std::move(sampler),
      .matrix = std::nullopt,
      .gain = std::move(gain),
      .exact_vulnerability = exact,
      .metric = {MetricKind::kManhattan, std::move(codec)},
      .observable_count = 0,
  };
}

}  // namespace gleak
