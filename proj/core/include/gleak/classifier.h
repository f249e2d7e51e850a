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

#ifndef GLEAK_CLASSIFIER_H_
#define GLEAK_CLASSIFIER_H_

#include <cstddef>

#include "absl/status/statusor.h"
#include "gleak/observable.h"
#include "gleak/qif.h"
#include "gleak/sampling.h"

namespace gleak {

// A learned or given mapping f : Y -> W. Implementations must be total and
// deterministic.
class Classifier {
 public:
  virtual ~Classifier() = default;

  virtual std::size_t Predict(const Observable& y) const = 0;
  virtual std::size_t num_guesses() const = 0;
};

// Adapts a Strategy over a finite observable alphabet. Out-of-range
// observables map to `fallback`.
class StrategyClassifier final : public Classifier {
 public:
  StrategyClassifier(Strategy strategy, std::size_t num_guesses,
                     std::size_t fallback = 0)
      : strategy_(std::move(strategy)), num_guesses_(num_guesses),
        fallback_(fallback) {}

  std::size_t Predict(const Observable& y) const override;
  std::size_t num_guesses() const override { return num_guesses_; }

 private:
  Strategy strategy_;
  std::size_t num_guesses_;
  std::size_t fallback_;
};

// Empirical functional (1/n) sum_{(x,y) in T_n} g(f(y), x).
absl::StatusOr<double> EmpiricalFunctional(const Classifier& f,
                                           const SampleSet& validation,
                                           const GainFunction& gain);

}  // namespace gleak

#endif  // GLEAK_CLASSIFIER_H_
