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


#ifndef GLEAK_HARNESS_CONFIG_H_
#define GLEAK_HARNESS_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "gleak/estimation.h"
#include "gleak/mlp.h"
#include "gleak/scenarios/dp.h"
#include "gleak/scenarios/geometric.h"
#include "gleak/scenarios/location.h"
#include "gleak/scenarios/password.h"
#include "gleak/scenarios/scenario.h"

namespace gleak {

inline constexpr std::string_view kConfigSchema = "leak-config/1";

// Network hyper-parameters for one pre-processing path. `epochs` and
// `batch_size` hold one value for every training size or one per size.
struct MlpSchedule {
  std::vector<std::size_t> hidden = {100, 100, 100};
  double learning_rate = 1e-3;
  std::vector<std::size_t> epochs = {700};
  std::vector<std::size_t> batch_size = {1000};

  MlpConfig ForSize(std::size_t size_index) const;
  absl::Status Validate(std::size_t num_sizes) const;
};

struct TrialMatrixConfig {
  std::string scenario = "multi-guess";
  std::string profile = "desk";
  std::vector<EstimationMethod> methods;
  std::vector<LearnerKind> learners;
  std::vector<std::size_t> sizes;
  std::size_t training_sets = 3;     // I
  std::size_t validation_sets = 10;  // J
  std::size_t validation_size = 10000;
  std::uint64_t master_seed = 1;
  // 0 picks the hardware concurrency.
  std::size_t workers = 0;
  MlpSchedule mlp_data;
  MlpSchedule mlp_channel;

  // Scenario parameters; only the selected scenario's block is used.
  GeometricChannelConfig geometric;
  std::size_t tries = 2;
  GridScenarioConfig grid;
  std::string checkins_path;
  CheckinColumns checkin_columns;
  DpScenarioConfig dp;
  std::string severity_path;
  std::size_t severity_column = 13;
  PasswordScenarioConfig password;

  absl::Status Validate() const;
  // Resolved configuration as JSON, including the schema tag.
  std::string ToJson() const;
};

inline constexpr std::string_view kScenarioIds[] = {"multi-guess", "location",
                                                    "dp", "password"};

// Defaults of a named profile ("desk" or "paper") for a scenario.
absl::StatusOr<TrialMatrixConfig> ProfileConfig(std::string_view scenario,
                                                std::string_view profile);

// Parses a configuration document. Scenario and profile select the starting
// defaults; any other key present overrides them. Unknown keys are errors.
absl::StatusOr<TrialMatrixConfig> ParseConfig(std::string_view json);
absl::StatusOr<TrialMatrixConfig> ReadConfigFile(const std::string& path);

// Instantiates the selected scenario, reading ingestion files when set.
absl::StatusOr<ScenarioInstance> BuildScenario(const TrialMatrixConfig& config);

}  // namespace gleak

#endif  // GLEAK_HARNESS_CONFIG_H_
