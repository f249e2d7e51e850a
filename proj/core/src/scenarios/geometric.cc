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


#include "gleak/scenarios/geometric.h"

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "gleak/features.h"
#include "gleak/sampling.h"
#include "gleak/status_macros.h"

namespace gleak {

double GeometricChannelConfig::lambda() const {
  return std::expm1(nu) / (std::exp(nu) + 1.0);
}

absl::Status GeometricChannelConfig::Validate() const {
  if (!(nu > 0.0)) return absl::InvalidArgumentError("nu must be positive");
  if (secrets == 0 || observables == 0) {
    return absl::InvalidArgumentError("secret and observable counts must be positive");
  }
  if (bucket_width == 0 || bucket_width > observables) {
    return absl::InvalidArgumentError("bucket width must be in [1, observables]");
  }
  if (!std::isfinite(scale) || !std::isfinite(offset)) {
    return absl::InvalidArgumentError("rescale coefficients must be finite");
  }
  return absl::OkStatus();
}

GeometricChannelConfig GeometricChannelConfig::Paper() { return {}; }

GeometricChannelConfig GeometricChannelConfig::Desk() {
  GeometricChannelConfig c;
  c.bucket_width = 10;
  return c;
}

absl::StatusOr<Channel> GeometricChannel(const GeometricChannelConfig& config) {
  GLEAK_RETURN_IF_ERROR(config.Validate());
  const std::size_t ny = config.output_size();
  const double lambda = config.lambda();
  Matrix rows(config.secrets, ny);
  for (std::size_t x = 0; x < config.secrets; ++x) {
    const double r = config.rescale(x);
    auto row = rows.row(x);
    KahanSum total;
    for (std::size_t y = 0; y < config.observables; ++y) {
      // An infinite nu underflows to a point mass.
      const double v =
          std::isinf(config.nu)
              ? (std::abs(r - static_cast<double>(y)) < 0.5 ? 1.0 : 0.0)
              : lambda * std::exp(-config.nu * std::abs(r - static_cast<double>(y)));
      row[y / config.bucket_width] += v;
      total.Add(v);
    }
    if (!(total.value() > 0.0)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "row ", x, " has no mass on the observable grid"));
    }
    for (double& v : row) v /= total.value();
  }
  return Channel::Create(Alphabet::Indexed(config.secrets),
                         Alphabet::Indexed(ny), std::move(rows));
}

absl::StatusOr<GainFunction> TwoTriesGain(std::size_t num_secrets,
                                          std::size_t k) {
  if (k < 1 || k >= num_secrets) {
    return absl::InvalidArgumentError(absl::StrCat(
        "tries must be in [1, ", num_secrets, "), got ", k));
  }
  const Alphabet secrets = Alphabet::Indexed(num_secrets);
  if (k == 1) return GainFunction::Identity(secrets);

  std::vector<std::vector<std::size_t>> subsets;
  std::vector<std::size_t> current(k);
  for (std::size_t i = 0; i < k; ++i) current[i] = i;
  while (true) {
    subsets.push_back(current);
    // Advance to the next k-subset in lexicographic order.
    std::size_t i = k;
    while (i > 0 && current[i - 1] == num_secrets - k + (i - 1)) --i;
    if (i == 0) break;
    ++current[i - 1];
    for (std::size_t j = i; j < k; ++j) current[j] = current[j - 1] + 1;
  }

  std::vector<std::string> labels;
  labels.reserve(subsets.size());
  Matrix gains(subsets.size(), num_secrets);
  for (std::size_t w = 0; w < subsets.size(); ++w) {
    std::string label = "{";
    for (std::size_t j = 0; j < k; ++j) {
      if (j > 0) label += ",";
      label += std::to_string(subsets[w][j]);
      gains(w, subsets[w][j]) = 1.0;
    }
    labels.push_back(label + "}");
  }
  GLEAK_ASSIGN_OR_RETURN(Alphabet guesses, Alphabet::Create(std::move(labels)));
  return GainFunction::Create(std::move(guesses), secrets, std::move(gains));
}

absl::StatusOr<ScenarioInstance> MultiGuessScenario(
    const GeometricChannelConfig& config, std::size_t tries) {
  GLEAK_ASSIGN_OR_RETURN(Channel channel, GeometricChannel(config));
  GLEAK_ASSIGN_OR_RETURN(GainFunction gain, TwoTriesGain(config.secrets, tries));
  Prior prior = Prior::Uniform(channel.input());
  GLEAK_ASSIGN_OR_RETURN(double exact,
                         PosteriorVulnerability(prior, channel, gain));
  const std::size_t ny = channel.output().size();
  GLEAK_ASSIGN_OR_RETURN(
      FeatureCodec codec,
      FeatureCodec::Uniform(1, std::max(1.0, static_cast<double>(ny) / 10.0)));
  auto sampler = std::make_shared<MatrixChannelSampler>(channel);
  return ScenarioInstance{
      .id = "multi-guess",
      .prior = std::move(prior),
      .channel = std::move(sampler),
      .matrix = std::move(channel),
      .gain = std::move(gain),
      .exact_vulnerability = exact,
      .metric = {MetricKind::kAbsoluteNumeric, std::move(codec)},
      .observable_count = ny,
  };
}

}  // namespace gleak
