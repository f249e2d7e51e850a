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


#ifndef GLEAK_SCENARIOS_PASSWORD_H_
#define GLEAK_SCENARIOS_PASSWORD_H_

#include <cstddef>
#include <cstdint>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "gleak/preprocess.h"
#include "gleak/qif.h"
#include "gleak/scenarios/scenario.h"

namespace gleak {

// Early-exit password checker. The attacker submits a fixed string that
// shares the known prefix with the stored password and learns the position
// of the first mismatch (or total_bits on a full match) through a delay
// blurred by two-sided geometric noise and clamped to 1..total_bits.
// The gain only looks at whether the stored bit `target_bit` agrees with the
// submitted one, so secrets are tracked as that class: the stored suffix is
// drawn lazily, bit by bit, when a check is simulated.
struct PasswordScenarioConfig {
  std::size_t total_bits = 128;
  std::size_t prefix_bits = 6;
  std::size_t target_bit = 7;  // 1-based, the first unknown bit
  double nu = 0.5;

  std::size_t buckets() const { return total_bits; }
  absl::Status Validate() const;
};

inline constexpr std::size_t kPasswordAgree = 0;
inline constexpr std::size_t kPasswordDisagree = 1;

// P(observable = o | class) for o = 1..total_bits, computed from the
// fail-position law of independent fair bits and the clamped noise.
absl::StatusOr<Channel> PasswordClassChannel(const PasswordScenarioConfig& config);

// Channel pre-processing of the class prior under the partition gain.
absl::StatusOr<ChannelPreprocDerivation> PasswordPreprocess(
    const PasswordScenarioConfig& config);

absl::StatusOr<double> PasswordExactVulnerability(
    const PasswordScenarioConfig& config);

absl::StatusOr<ScenarioInstance> PasswordScenario(
    const PasswordScenarioConfig& config);

}  // namespace gleak

#endif  // GLEAK_SCENARIOS_PASSWORD_H_
