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

#include "gleak/features.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "string_compat.h"

namespace gleak {

absl::StatusOr<FeatureCodec> FeatureCodec::Create(std::vector<double> scales) {
  if (scales.empty() || scales.size() > Observable::kMaxDim) {
    return absl::InvalidArgumentError("feature codec needs 1..6 scales");
  }
  for (double s : scales) {
    if (!(s > 0.0) || !std::isfinite(s)) {
      return absl::InvalidArgumentError("feature scales must be positive and finite");
    }
  }
  return FeatureCodec(std::move(scales));
}

absl::StatusOr<FeatureCodec> FeatureCodec::Uniform(std::size_t dim, double scale) {
  return Create(std::vector<double>(dim, scale));
}

void FeatureCodec::Encode(const Observable& y, std::span<double> out) const {
  for (std::size_t i = 0; i < scales_.size(); ++i) {
    out[i] = i < y.dim() ? static_cast<double>(y[i]) / scales_[i] : 0.0;
  }
}

std::vector<double> FeatureCodec::Encode(const Observable& y) const {
  std::vector<double> out(scales_.size());
  Encode(y, out);
  return out;
}

std::uint64_t DistanceMetric::RankKey(const Observable& a,
                                      const Observable& b) const {
  const std::size_t dim = std::max(a.dim(), b.dim());
  std::uint64_t key = 0;
  for (std::size_t i = 0; i < dim; ++i) {
    const std::int64_t ai = i < a.dim() ? a[i] : 0;
    const std::int64_t bi = i < b.dim() ? b[i] : 0;
    const auto d = static_cast<std::uint64_t>(ai > bi ? ai - bi : bi - ai);
    key += kind == MetricKind::kEuclidean ? d * d : d;
  }
  return key;
}

double DistanceMetric::Distance(const Observable& a, const Observable& b) const {
  const auto fa = codec.Encode(a);
  const auto fb = codec.Encode(b);
  double acc = 0.0;
  for (std::size_t i = 0; i < fa.size(); ++i) {
    const double d = std::abs(fa[i] - fb[i]);
    acc += kind == MetricKind::kEuclidean ? d * d : d;
  }
  return kind == MetricKind::kEuclidean ? std::sqrt(acc) : acc;
}

absl::StatusOr<MetricKind> ParseMetricKind(std::string_view name) {
  if (name == "absolute") return MetricKind::kAbsoluteNumeric;
  if (name == "euclidean") return MetricKind::kEuclidean;
  if (name == "manhattan") return MetricKind::kManhattan;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown metric '", internal::Av(name), "'"));
}

std::string_view MetricKindName(MetricKind kind) {
  switch (kind) {
    case MetricKind::kAbsoluteNumeric:
      return "absolute";
    case MetricKind::kEuclidean:
      return "euclidean";
    case MetricKind::kManhattan:
      return "manhattan";
  }
  return "absolute";
}

}  // namespace gleak
