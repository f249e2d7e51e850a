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


#ifndef GLEAK_SCENARIOS_DP_H_
#define GLEAK_SCENARIOS_DP_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <string>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "gleak/qif.h"
#include "gleak/scenarios/scenario.h"

namespace gleak {

inline constexpr std::size_t kSeverityClasses = 5;
using LabelCounts = std::array<std::int64_t, kSeverityClasses>;

// Histogram release over two adjacent databases: secret 0 ("full") has
// `counts`, secret 1 ("minus") lacks one record of `removed_label`. Each count
// receives independent two-sided geometric noise P(k) ∝ exp(-nu |k|).
struct DpScenarioConfig {
  LabelCounts counts = {164, 55, 36, 35, 13};
  std::size_t removed_label = 4;
  double nu = 1.0;
  // The exact sum stops once the neglected noise mass is below this.
  double tail_mass = 1e-12;

  absl::Status Validate() const;
};

// Histogram of a severity column holding labels 0..4. Lines are comma
// separated; records whose severity field is not an integer in range are
// rejected.
absl::StatusOr<LabelCounts> ReadSeverityHistogram(std::istream& in,
                                                  std::size_t severity_column);
absl::StatusOr<LabelCounts> ReadSeverityHistogramFile(
    const std::string& path, std::size_t severity_column = 13);

// Detecting a present high-severity record (labels 3 and 4) pays 2, any other
// correct guess pays 1, wrong guesses pay 0.
absl::StatusOr<GainFunction> DpGain(const DpScenarioConfig& config);

// Smallest R with P(|noise| > R) < tail_mass; 0 for infinite nu.
std::int64_t DpTruncationRadius(double nu, double tail_mass);

// V_g by summing over the one coordinate whose law differs between the two
// secrets.
absl::StatusOr<double> DpExactVulnerability(const DpScenarioConfig& config,
                                            const Prior& prior,
                                            const GainFunction& gain);

struct MonteCarloEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
};

// Expected gain of the Bayes-optimal guess over sampled releases.
absl::StatusOr<MonteCarloEstimate> DpMonteCarloVulnerability(
    const DpScenarioConfig& config, const Prior& prior, const GainFunction& gain,
    std::size_t samples, std::uint64_t master_seed);

// Observables are the five released counts minus the public counts of the
// full database, ranked by Manhattan distance.
absl::StatusOr<ScenarioInstance> DpScenario(const DpScenarioConfig& config);

}  // namespace gleak

#endif  // GLEAK_SCENARIOS_DP_H_
