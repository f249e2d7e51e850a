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

#include "gleak/bounds.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "absl/strings/str_cat.h"
#include "gleak/matrix.h"
#include "gleak/status_macros.h"
#include "json.hpp"

namespace gleak {
namespace {

double Clip01(double p) { return std::clamp(p, 0.0, 1.0); }

// ceil(x) as an integer; fails when x does not fit.
absl::StatusOr<std::uint64_t> CeilToCount(double x, const char* what) {
  const double c = std::ceil(x);
  if (!std::isfinite(c) || c >= 0x1p63) {
    return absl::OutOfRangeError(absl::StrCat(what, " does not fit in 64 bits"));
  }
  return static_cast<std::uint64_t>(std::max(c, 1.0));
}

}  // namespace

absl::Status BoundInputs::Validate() const {
  if (m == 0 || n == 0) return absl::InvalidArgumentError("m and n must be >= 1");
  if (!(sigma2 > 0.0)) return absl::InvalidArgumentError("sigma2 must be positive");
  if (!(b > a)) return absl::InvalidArgumentError("gain range needs b > a");
  if (!(epsilon > 0.0)) return absl::InvalidArgumentError("epsilon must be positive");
  if (!(delta > 0.0) || !(split > 0.0)) {
    return absl::InvalidArgumentError("delta and Delta must be positive");
  }
  if (!(split < delta)) return absl::InvalidArgumentError("Delta must be < delta");
  if (!(log_hypotheses >= 0.0)) {
    return absl::InvalidArgumentError("ln|H| must be >= 0");
  }
  if (sigma2 > WorstCaseVariance(a, b) * (1.0 + 1e-12)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "sigma2 = ", sigma2, " exceeds the Popoviciu bound (b-a)^2/4 = ",
        WorstCaseVariance(a, b)));
  }
  return absl::OkStatus();
}

double LogHypothesisCount(std::size_t num_guesses, std::size_t num_observables) {
  return static_cast<double>(num_observables) *
         std::log(static_cast<double>(num_guesses));
}

double WorstCaseVariance(double a, double b) { return (b - a) * (b - a) / 4.0; }

absl::StatusOr<double> PlugInVariance(const Classifier& f,
                                      const SampleSet& validation,
                                      const GainFunction& gain) {
  GLEAK_ASSIGN_OR_RETURN(const double mean, EmpiricalFunctional(f, validation, gain));
  KahanSum ss;
  for (const auto& [x, y] : validation.pairs()) {
    const double d = gain(f.Predict(y), x) - mean;
    ss.Add(d * d);
  }
  return ss.value() / static_cast<double>(validation.size());
}

double ValidationDeviationProb(std::uint64_t n, double sigma2, double a, double b,
                               double epsilon) {
  const double denom = 2.0 * sigma2 + 2.0 * (b - a) * epsilon / 3.0;
  return Clip01(2.0 * std::exp(-static_cast<double>(n) * epsilon * epsilon / denom));
}

double TrainingSuboptimalityProb(std::uint64_t m, double sigma2,
                                 double log_hypotheses, double a, double b,
                                 double epsilon) {
  const double denom = 8.0 * sigma2 + 4.0 * (b - a) * epsilon / 3.0;
  const double exponent = std::log(2.0) + log_hypotheses -
                          static_cast<double>(m) * epsilon * epsilon / denom;
  return Clip01(std::exp(std::min(exponent, 1.0)));
}

ExpectedErrorBounds ComputeExpectedErrorBounds(const BoundInputs& in) {
  const double eta = in.eta();
  const double n = static_cast<double>(in.n);
  const double m = static_cast<double>(in.m);
  const double s2 = in.sigma2;
  // |H| * t evaluated in log space.
  auto times_h = [&](double t) {
    return t > 0.0 ? std::exp(in.log_hypotheses + std::log(t)) : 0.0;
  };
  ExpectedErrorBounds out;
  if (s2 <= in.epsilon) {
    out.branch = GapBranch::kExponential;
    out.validation_gap = 4.0 * eta / n * std::exp(-n * s2 / (2.0 * eta));
    out.training_gap =
        times_h(8.0 * (1.0 + eta) / m * std::exp(-m * s2 / (4.0 * (1.0 + eta))));
  } else {
    out.branch = GapBranch::kErf;
    const double sqrt_pi = std::sqrt(std::numbers::pi);
    const double r = std::sqrt(2.0 * s2 * eta / n);
    out.validation_gap = r * sqrt_pi * std::erf(s2 / r);
    const double rm = std::sqrt(4.0 * s2 * (1.0 + eta) / m);
    out.training_gap = times_h(rm * sqrt_pi * std::erf(s2 / rm));
  }
  return out;
}

absl::StatusOr<SampleSizes> SampleComplexity(double epsilon, double delta,
                                             double split, double sigma2,
                                             double a, double b,
                                             double log_hypotheses) {
  if (!(epsilon > 0.0)) return absl::InvalidArgumentError("epsilon must be positive");
  if (!(split > 0.0) || !(split < delta)) {
    return absl::InvalidArgumentError("sample complexity needs 0 < Delta < delta");
  }
  const double eps2 = epsilon * epsilon;
  const double m = (8.0 * sigma2 + 4.0 * (b - a) * epsilon / 3.0) / eps2 *
                   (std::log(2.0) + log_hypotheses - std::log(delta - split));
  const double n =
      (2.0 * sigma2 + 2.0 * (b - a) * epsilon / 3.0) / eps2 * std::log(2.0 / split);
  SampleSizes out;
  GLEAK_ASSIGN_OR_RETURN(out.m, CeilToCount(m, "M"));
  GLEAK_ASSIGN_OR_RETURN(out.n, CeilToCount(n, "N"));
  return out;
}

absl::StatusOr<BoundReport> ComputeBoundReport(const BoundInputs& in) {
  GLEAK_RETURN_IF_ERROR(in.Validate());
  BoundReport r;
  r.inputs = in;
  r.validation_deviation_prob = ValidationDeviationProb(in.n, in.sigma2, in.a, in.b, in.epsilon);
  r.training_suboptimality_prob = TrainingSuboptimalityProb(
      in.m, in.sigma2, in.log_hypotheses, in.a, in.b, in.epsilon);
  r.expected = ComputeExpectedErrorBounds(in);
  GLEAK_ASSIGN_OR_RETURN(r.sizes, SampleComplexity(in.epsilon, in.delta, in.split,
                                                   in.sigma2, in.a, in.b,
                                                   in.log_hypotheses));
  return r;
}

std::string BoundReport::ToJson() const {
  nlohmann::ordered_json j;
  j["inputs"] = {{"m", inputs.m},
                 {"n", inputs.n},
                 {"sigma2", inputs.sigma2},
                 {"a", inputs.a},
                 {"b", inputs.b},
                 {"log_hypothesis_count", inputs.log_hypotheses},
                 {"epsilon", inputs.epsilon},
                 {"delta", inputs.delta},
                 {"split", inputs.split},
                 {"eta", inputs.eta()}};
  j["validation_deviation_prob"] = validation_deviation_prob;
  j["training_suboptimality_prob"] = training_suboptimality_prob;
  j["expected_validation_gap"] = expected.validation_gap;
  // JSON has no infinity; a vacuous bound is reported as null.
  if (std::isfinite(expected.training_gap)) {
    j["expected_training_gap"] = expected.training_gap;
  } else {
    j["expected_training_gap"] = nullptr;
  }
  j["gap_branch"] = expected.branch == GapBranch::kExponential
                        ? "sigma2<=epsilon (exponential)"
                        : "sigma2>epsilon (erf)";
  j["M"] = sizes.m;
  j["N"] = sizes.n;
  return j.dump(2);
}

}  // namespace gleak
