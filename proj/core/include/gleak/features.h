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

#ifndef GLEAK_FEATURES_H_
#define GLEAK_FEATURES_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "gleak/observable.h"

namespace gleak {

// Maps an integer observable tuple to a real feature vector by dividing each
// component by a fixed scale: y / |Y| for scalar observables, (row, col) /
// grid side for grid cells, counts / 303 for histograms, and so on.
class FeatureCodec {
 public:
  FeatureCodec() = default;
  static absl::StatusOr<FeatureCodec> Create(std::vector<double> scales);
  // Same scale on every one of `dim` components.
  static absl::StatusOr<FeatureCodec> Uniform(std::size_t dim, double scale);

  std::size_t dim() const { return scales_.size(); }
  const std::vector<double>& scales() const { return scales_; }

  // Writes dim() features. Missing trailing components read as 0.
  void Encode(const Observable& y, std::span<double> out) const;
  std::vector<double> Encode(const Observable& y) const;

 private:
  explicit FeatureCodec(std::vector<double> scales) : scales_(std::move(scales)) {}
  std::vector<double> scales_;
};

enum class MetricKind { kAbsoluteNumeric, kEuclidean, kManhattan };

// Distance between observables. k-NN ranks neighbours on the raw integer
// coordinates, which orders them exactly as the uniformly scaled features do
// and keeps equal distances exactly equal.
struct DistanceMetric {
  MetricKind kind = MetricKind::kAbsoluteNumeric;
  FeatureCodec codec;

  // Squared Euclidean or L1 distance on raw coordinates. Monotone in Distance.
  std::uint64_t RankKey(const Observable& a, const Observable& b) const;
  // Distance on encoded features.
  double Distance(const Observable& a, const Observable& b) const;
};

absl::StatusOr<MetricKind> ParseMetricKind(std::string_view name);
std::string_view MetricKindName(MetricKind kind);

}  // namespace gleak

#endif  // GLEAK_FEATURES_H_
