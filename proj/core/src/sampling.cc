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

#include "gleak/sampling.h"

#include <algorithm>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace gleak {

absl::StatusOr<SampleSet> SampleSet::Create(Alphabet secrets,
                                            std::vector<LabeledSample> pairs,
                                            SeedProvenance provenance) {
  for (const auto& p : pairs) {
    if (p.secret >= secrets.size()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "sample secret index ", p.secret, " out of range for alphabet of size ",
          secrets.size()));
    }
  }
  return SampleSet(std::move(secrets), std::move(pairs), provenance);
}

CategoricalSampler::CategoricalSampler(std::span<const double> weights) {
  cumulative_.reserve(weights.size());
  double total = 0.0;
  for (double w : weights) {
    total += w;
    cumulative_.push_back(total);
  }
}

std::size_t CategoricalSampler::Sample(Rng& rng) const {
  const double u = rng.Uniform01() * cumulative_.back();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) {
    // u rounded up to the total; take the last index carrying mass.
    it = std::lower_bound(cumulative_.begin(), cumulative_.end(), cumulative_.back());
  }
  return static_cast<std::size_t>(it - cumulative_.begin());
}

MatrixChannelSampler::MatrixChannelSampler(Channel channel)
    : channel_(std::move(channel)) {
  rows_.reserve(channel_.input().size());
  for (std::size_t x = 0; x < channel_.input().size(); ++x) {
    rows_.emplace_back(channel_.matrix().row(x));
  }
}

Observable MatrixChannelSampler::Sample(std::size_t secret, Rng& rng) const {
  return Observable(static_cast<std::int64_t>(rows_[secret].Sample(rng)));
}

absl::StatusOr<SampleSet> SampleJoint(const JointDistribution& joint,
                                      std::size_t count,
                                      std::uint64_t master_seed,
                                      std::uint64_t stream_id) {
  if (count == 0) return absl::InvalidArgumentError("sample count must be >= 1");
  Rng rng(master_seed, stream_id);
  const CategoricalSampler cells(joint.matrix().data());
  const std::size_t ny = joint.observables().size();
  std::vector<LabeledSample> pairs;
  pairs.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t cell = cells.Sample(rng);
    pairs.push_back({cell / ny, Observable(static_cast<std::int64_t>(cell % ny))});
  }
  return SampleSet::Create(joint.secrets(), std::move(pairs),
                           {master_seed, stream_id});
}

absl::StatusOr<SampleSet> SampleJoint(const Prior& prior,
                                      const SamplingChannel& channel,
                                      std::size_t count,
                                      std::uint64_t master_seed,
                                      std::uint64_t stream_id) {
  if (count == 0) return absl::InvalidArgumentError("sample count must be >= 1");
  if (!(prior.alphabet() == channel.input())) {
    return absl::InvalidArgumentError("prior/channel alphabets differ");
  }
  Rng rng(master_seed, stream_id);
  const CategoricalSampler secrets(prior.probs());
  std::vector<LabeledSample> pairs;
  pairs.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t x = secrets.Sample(rng);
    pairs.push_back({x, channel.Sample(x, rng)});
  }
  return SampleSet::Create(prior.alphabet(), std::move(pairs),
                           {master_seed, stream_id});
}

}  // namespace gleak
