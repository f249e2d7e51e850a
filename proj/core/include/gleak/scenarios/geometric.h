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


#ifndef GLEAK_SCENARIOS_GEOMETRIC_H_
#define GLEAK_SCENARIOS_GEOMETRIC_H_

#include <cstddef>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "gleak/qif.h"
#include "gleak/scenarios/scenario.h"

namespace gleak {

// Truncated geometric channel C_xy ∝ lambda exp(-nu |r(x) - y|) on the grid
// y = 0..observables-1 with r(x) = scale * x + offset. Rows are renormalized
// after truncation. With bucket_width > 1, consecutive runs of that many grid
// points are merged into one output symbol.
struct GeometricChannelConfig {
  double nu = 0.002;
  std::size_t secrets = 10;
  std::size_t observables = 16000;
  double scale = 1000.0;
  double offset = 3499.5;
  std::size_t bucket_width = 1;

  double lambda() const;
  double rescale(std::size_t x) const { return scale * x + offset; }
  std::size_t output_size() const {
    return (observables + bucket_width - 1) / bucket_width;
  }
  absl::Status Validate() const;

  // Ten secrets over 16000 observables.
  static GeometricChannelConfig Paper();
  // Same channel seen through buckets of width 10 (1600 outputs).
  static GeometricChannelConfig Desk();
};

absl::StatusOr<Channel> GeometricChannel(const GeometricChannelConfig& config);

// W = k-subsets of X in lexicographic order, g(w, x) = [x in w]. k = 1 gives
// the identity gain.
absl::StatusOr<GainFunction> TwoTriesGain(std::size_t num_secrets,
                                          std::size_t k = 2);

// Uniform prior, the geometric channel and the k-tries gain; observables are
// output indices ranked by absolute difference.
absl::StatusOr<ScenarioInstance> MultiGuessScenario(
    const GeometricChannelConfig& config, std::size_t tries = 2);

}  // namespace gleak

#endif  // GLEAK_SCENARIOS_GEOMETRIC_H_
