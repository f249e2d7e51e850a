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

#ifndef GLEAK_BOUNDS_H_
#define GLEAK_BOUNDS_H_

#include <cstddef>
#include <cstdint>
#include <string>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "gleak/classifier.h"
#include "gleak/qif.h"
#include "gleak/sampling.h"

namespace gleak {

// Inputs of the distribution-free guarantees. |H| is carried as ln|H| since
// the class of all functions Y -> W has |W|^|Y| members.
struct BoundInputs {
  std::uint64_t m = 1;         // training size
  std::uint64_t n = 1;         // validation size
  double sigma2 = 0.25;        // variance proxy
  double a = 0.0;              // gain range
  double b = 1.0;
  double log_hypotheses = 0.0; // ln |H|
  double epsilon = 0.1;
  double delta = 0.05;
  double split = 0.025;        // Delta, 0 < Delta < delta

  double eta() const { return 1.0 + (b - a) / 3.0; }
  // Positivity, Delta < delta, and sigma2 <= (b - a)^2 / 4.
  absl::Status Validate() const;
};

// ln(|W|^|Y|).
double LogHypothesisCount(std::size_t num_guesses, std::size_t num_observables);

// Popoviciu bound (b - a)^2 / 4.
double WorstCaseVariance(double a, double b);

// Sample variance of g(f(y), x) over the validation pairs.
absl::StatusOr<double> PlugInVariance(const Classifier& f,
                                      const SampleSet& validation,
                                      const GainFunction& gain);

// P(|V_n(f) - V(f)| >= eps) <= 2 exp(-n eps^2 / (2 sigma2 + 2 (b-a) eps / 3)),
// clipped to [0, 1].
double ValidationDeviationProb(std::uint64_t n, double sigma2, double a, double b,
                               double epsilon);

// P(V_g - V(f_m) >= eps) <= 2 |H| exp(-m eps^2 / (8 sigma2 + 4 (b-a) eps / 3)),
// clipped to [0, 1].
double TrainingSuboptimalityProb(std::uint64_t m, double sigma2,
                                 double log_hypotheses, double a, double b,
                                 double epsilon);

enum class GapBranch { kExponential, kErf };

struct ExpectedErrorBounds {
  double validation_gap = 0.0;  // bound on E|V(f_m) - V_n(f_m)|
  double training_gap = 0.0;    // bound on V_g - E[V(f_m)]
  GapBranch branch = GapBranch::kExponential;
};

// With eta = 1 + (b - a)/3:
//   sigma2 <= eps: (4 eta / n) exp(-n sigma2 / (2 eta)) and
//                  |H| 8 (1 + eta) / m exp(-m sigma2 / (4 (1 + eta)));
//   sigma2 >  eps: r sqrt(pi) erf(sigma2 / r) with r = sqrt(2 sigma2 eta / n),
//                  and |H| r' sqrt(pi) erf(sigma2 / r') with
//                  r' = sqrt(4 sigma2 (1 + eta) / m).
// The training gap may be +inf when |H| is astronomically large.
ExpectedErrorBounds ComputeExpectedErrorBounds(const BoundInputs& in);

struct SampleSizes {
  std::uint64_t m = 0;  // M(eps, delta)
  std::uint64_t n = 0;  // N(eps, delta)
};

// M = ceil[(8 sigma2 + 4 (b-a) eps / 3) / eps^2 ln(2 |H| / (delta - Delta))],
// N = ceil[(2 sigma2 + 2 (b-a) eps / 3) / eps^2 ln(2 / Delta)].
absl::StatusOr<SampleSizes> SampleComplexity(double epsilon, double delta,
                                             double split, double sigma2,
                                             double a, double b,
                                             double log_hypotheses);

struct BoundReport {
  BoundInputs inputs;
  double validation_deviation_prob = 0.0;
  double training_suboptimality_prob = 0.0;
  ExpectedErrorBounds expected;
  SampleSizes sizes;

  std::string ToJson() const;
};

absl::StatusOr<BoundReport> ComputeBoundReport(const BoundInputs& in);

}  // namespace gleak

#endif  // GLEAK_BOUNDS_H_
