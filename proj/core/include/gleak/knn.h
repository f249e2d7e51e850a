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

#ifndef GLEAK_KNN_H_
#define GLEAK_KNN_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "absl/status/statusor.h"
#include "gleak/classifier.h"
#include "gleak/features.h"
#include "gleak/observable.h"
#include "gleak/preprocess.h"

namespace gleak {

// k = max(1, floor(ln l)) for an index of l distinct observables.
std::size_t KnnNeighbourCount(std::size_t distinct_observables);

// Nearest-neighbour majority vote over the distinct observables of the
// training data. Each indexed observable carries the weighted tally of the
// guesses it was seen with; a query sums the tallies of its k nearest
// observables (plus any tied with the k-th) and returns the heaviest guess,
// lowest index on ties.
class KnnClassifier final : public Classifier {
 public:
  static absl::StatusOr<KnnClassifier> Train(const WeightedSampleSet& data,
                                             DistanceMetric metric);

  std::size_t Predict(const Observable& y) const override;
  std::size_t num_guesses() const override { return num_guesses_; }

  std::size_t size() const { return observables_.size(); }
  std::size_t k() const { return k_; }
  // Indexed observables in canonical (sorted) order.
  const std::vector<Observable>& observables() const { return observables_; }
  // Tally of guess w at indexed observable i.
  std::uint64_t tally(std::size_t i, std::size_t w) const {
    return tallies_[i * num_guesses_ + w];
  }

 private:
  KnnClassifier() = default;
  // Indices of the k nearest observables plus ties with the k-th distance.
  void Neighbours(const Observable& y, std::vector<std::size_t>& out) const;
  void NeighboursScalar(std::int64_t y, std::vector<std::size_t>& out) const;

  DistanceMetric metric_;
  std::size_t num_guesses_ = 0;
  std::size_t k_ = 1;
  bool scalar_ = false;
  std::vector<Observable> observables_;
  std::vector<std::uint64_t> tallies_;
};

}  // namespace gleak

#endif  // GLEAK_KNN_H_
