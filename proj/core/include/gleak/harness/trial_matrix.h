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


#ifndef GLEAK_HARNESS_TRIAL_MATRIX_H_
#define GLEAK_HARNESS_TRIAL_MATRIX_H_

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "gleak/estimation.h"
#include "gleak/harness/config.h"
#include "gleak/scenarios/scenario.h"

namespace gleak {

struct BoxStats {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
};

// Quartiles with linear interpolation between order statistics.
absl::StatusOr<BoxStats> ComputeBoxStats(std::vector<double> values);

// Statistics of one (method, learner, training size) cell of the matrix.
struct CellMetrics {
  EstimationMethod method = EstimationMethod::kDataPreproc;
  LearnerKind learner = LearnerKind::kNone;
  std::size_t m = 0;
  std::size_t n = 0;
  std::size_t training_sets = 0;    // I
  std::size_t validation_sets = 0;  // J
  // Row-major I x J.
  std::vector<double> estimates;
  std::vector<double> deltas;
  double mean = 0.0;
  double dispersion = 0.0;
  double total_error = 0.0;
  BoxStats delta_box;
  BoxStats estimate_box;

  double delta(std::size_t i, std::size_t j) const {
    return deltas[i * validation_sets + j];
  }
};

// delta_ij = |estimate_ij - exact| / exact with mean, dispersion and total
// error over all I * J entries. Fails when exact is 0.
absl::StatusOr<CellMetrics> ComputeCellMetrics(EstimationMethod method,
                                               LearnerKind learner, std::size_t m,
                                               std::size_t n, std::size_t rows,
                                               std::size_t cols,
                                               std::vector<double> estimates,
                                               double exact);

struct MetricsReport {
  std::string scenario;
  double exact = 0.0;
  std::string config_json;
  std::vector<CellMetrics> cells;

  std::string ToJson() const;
};

using ProgressFn = std::function<void(std::string_view)>;

// Trains I models per (method, learner, size) and evaluates each on the J
// shared validation sets. Every random phase has its own stream id, so the
// result depends only on the configuration, never on worker scheduling.
absl::StatusOr<MetricsReport> RunTrialMatrix(const TrialMatrixConfig& config,
                                             const ScenarioInstance& scenario,
                                             const ProgressFn& progress = {});
absl::StatusOr<MetricsReport> RunTrialMatrix(const TrialMatrixConfig& config,
                                             const ProgressFn& progress = {});

// Writes <prefix>.summary.json, <prefix>.trials.csv and <prefix>.boxplot.csv,
// creating missing parent directories.
absl::Status EmitReports(const MetricsReport& report, const std::string& prefix);

}  // namespace gleak

#endif  // GLEAK_HARNESS_TRIAL_MATRIX_H_
