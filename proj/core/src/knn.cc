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

#include "gleak/knn.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "absl/status/status.h"

namespace gleak {

std::size_t KnnNeighbourCount(std::size_t distinct_observables) {
  if (distinct_observables <= 1) return 1;
  const auto k = static_cast<std::size_t>(
      std::floor(std::log(static_cast<double>(distinct_observables))));
  return std::max<std::size_t>(1, k);
}

absl::StatusOr<KnnClassifier> KnnClassifier::Train(const WeightedSampleSet& data,
                                                   DistanceMetric metric) {
  if (data.empty()) return absl::InvalidArgumentError("k-NN training data is empty");
  KnnClassifier model;
  model.metric_ = std::move(metric);
  model.num_guesses_ = data.guesses().size();

  std::map<Observable, std::size_t> slot;
  for (const auto& e : data.entries()) slot.emplace(e.observable, 0);
  model.observables_.reserve(slot.size());
  bool scalar = true;
  for (auto& [y, index] : slot) {
    index = model.observables_.size();
    model.observables_.push_back(y);
    scalar = scalar && y.dim() == 1;
  }
  model.scalar_ = scalar;
  model.tallies_.assign(model.observables_.size() * model.num_guesses_, 0);
  for (const auto& e : data.entries()) {
    model.tallies_[slot[e.observable] * model.num_guesses_ + e.guess] += e.weight;
  }
  model.k_ = KnnNeighbourCount(model.observables_.size());
  return model;
}

void KnnClassifier::NeighboursScalar(std::int64_t y,
                                     std::vector<std::size_t>& out) const {
  // observables_ is sorted, so the nearest ones are contiguous around y.
  const auto it = std::lower_bound(
      observables_.begin(), observables_.end(), y,
      [](const Observable& o, std::int64_t v) { return o[0] < v; });
  auto right = static_cast<std::ptrdiff_t>(it - observables_.begin());
  auto left = right - 1;
  const auto n = static_cast<std::ptrdiff_t>(observables_.size());
  auto dist = [&](std::ptrdiff_t i) {
    const std::int64_t v = observables_[i][0];
    return static_cast<std::uint64_t>(v > y ? v - y : y - v);
  };
  std::uint64_t kth = 0;
  while (out.size() < k_) {
    const bool take_left =
        left >= 0 && (right >= n || dist(left) <= dist(right));
    const std::ptrdiff_t pick = take_left ? left-- : right++;
    kth = dist(pick);
    out.push_back(static_cast<std::size_t>(pick));
  }
  while (left >= 0 && dist(left) == kth) out.push_back(left--);
  while (right < n && dist(right) == kth) out.push_back(right++);
}

void KnnClassifier::Neighbours(const Observable& y,
                               std::vector<std::size_t>& out) const {
  out.clear();
  if (k_ >= observables_.size()) {
    for (std::size_t i = 0; i < observables_.size(); ++i) out.push_back(i);
    return;
  }
  if (scalar_ && y.dim() == 1) {
    NeighboursScalar(y[0], out);
    return;
  }
  std::vector<std::pair<std::uint64_t, std::size_t>> keyed(observables_.size());
  for (std::size_t i = 0; i < observables_.size(); ++i) {
    keyed[i] = {metric_.RankKey(y, observables_[i]), i};
  }
  std::nth_element(keyed.begin(), keyed.begin() + (k_ - 1), keyed.end());
  const std::uint64_t kth = keyed[k_ - 1].first;
  for (const auto& [key, i] : keyed) {
    if (key <= kth) out.push_back(i);
  }
}

std::size_t KnnClassifier::Predict(const Observable& y) const {
  std::vector<std::size_t> neighbours;
  Neighbours(y, neighbours);
  std::vector<std::uint64_t> votes(num_guesses_, 0);
  for (std::size_t i : neighbours) {
    const std::uint64_t* row = &tallies_[i * num_guesses_];
    for (std::size_t w = 0; w < num_guesses_; ++w) votes[w] += row[w];
  }
  return static_cast<std::size_t>(
      std::max_element(votes.begin(), votes.end()) - votes.begin());
}

}  // namespace gleak
