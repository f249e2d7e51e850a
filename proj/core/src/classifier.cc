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

#include "gleak/classifier.h"

#include <unordered_map>

#include "absl/status/status.h"
#include "gleak/matrix.h"

namespace gleak {

std::size_t StrategyClassifier::Predict(const Observable& y) const {
  if (y.dim() != 1 || y[0] < 0 ||
      static_cast<std::size_t>(y[0]) >= strategy_.size()) {
    return fallback_;
  }
  return strategy_(y.index());
}

absl::StatusOr<double> EmpiricalFunctional(const Classifier& f,
                                           const SampleSet& validation,
                                           const GainFunction& gain) {
  if (validation.empty()) {
    return absl::InvalidArgumentError("validation set is empty");
  }
  if (!(validation.secrets() == gain.secrets())) {
    return absl::InvalidArgumentError("validation/gain secret alphabets differ");
  }
  if (f.num_guesses() != gain.num_guesses()) {
    return absl::InvalidArgumentError("classifier/gain guess alphabets differ");
  }
  std::unordered_map<Observable, std::size_t, ObservableHash> cache;
  KahanSum total;
  for (const auto& [x, y] : validation.pairs()) {
    auto it = cache.find(y);
    if (it == cache.end()) it = cache.emplace(y, f.Predict(y)).first;
    total.Add(gain(it->second, x));
  }
  return total.value() / static_cast<double>(validation.size());
}

}  // namespace gleak
