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

#include <cmath>
#include <numbers>
#include <random>

#include "gleak/classifier.h"
#include "gleak/qif.h"
#include "gleak/sampling.h"
#include "gtest/gtest.h"

namespace gleak {
namespace {

// erf(x) = 2/sqrt(pi) exp(-x^2) sum_k 2^k x^(2k+1) / (2k+1)!!, all terms
// positive, summed in long double.
long double SeriesErf(long double x) {
  long double term = x, sum = x;
  for (int k = 1; k < 400; ++k) {
    term *= 2.0L * x * x / (2.0L * k + 1.0L);
    sum += term;
    if (term < sum * 1e-21L) break;
  }
  return 2.0L / std::sqrt(std::numbers::pi_v<long double>) * std::exp(-x * x) * sum;
}

TEST(ErfTest, MatchesSeriesOracle) {
  for (int i = 0; i <= 600; ++i) {
    const double x = i * 0.01;
    EXPECT_NEAR(std::erf(x), static_cast<double>(SeriesErf(x)), 1e-10) << x;
  }
  EXPECT_EQ(std::erf(0.0), 0.0);
  EXPECT_NEAR(std::erf(1.0), 0.8427007929497149, 1e-15);
  EXPECT_NEAR(std::erf(30.0), 1.0, 1e-15);
}

TEST(ValidationDeviationProbTest, ClosedForm) {
  const double expected = 2.0 * std::exp(-1000 * 0.01 / (0.5 + 2.0 * 0.1 / 3.0));
  EXPECT_DOUBLE_EQ(ValidationDeviationProb(1000, 0.25, 0, 1, 0.1), expected);
  EXPECT_NEAR(std::log(expected / 2), -17.647, 1e-3);
  // Doubling n squares (p/2).
  const double p1 = ValidationDeviationProb(400, 0.25, 0, 1, 0.1) / 2;
  const double p2 = ValidationDeviationProb(800, 0.25, 0, 1, 0.1) / 2;
  EXPECT_NEAR(p2, p1 * p1, 1e-15);
  double prev = 1.0;
  for (double eps = 0.01; eps < 2.0; eps += 0.01) {
    const double p = ValidationDeviationProb(100, 0.25, 0, 1, eps);
    EXPECT_LE(p, prev);
    EXPECT_GE(p, 0.0);
    prev = p;
  }
  EXPECT_LT(prev, 1e-20);
  EXPECT_EQ(ValidationDeviationProb(1, 0.25, 0, 1, 0.01), 1.0);
}

TEST(TrainingSuboptimalityProbTest, ClosedForm) {
  const double log_h = std::log(45.0 * 45.0);
  const double expected =
      2.0 * 2025.0 * std::exp(-10000 * 0.01 / (8 * 0.25 + 4.0 * 0.1 / 3.0));
  EXPECT_NEAR(TrainingSuboptimalityProb(10000, 0.25, log_h, 0, 1, 0.1), expected,
              expected * 1e-12);
  // |H| = 1 is the two-sided single-hypothesis bound.
  EXPECT_NEAR(TrainingSuboptimalityProb(5000, 0.25, 0.0, 0, 1, 0.1),
              2.0 * std::exp(-50.0 / (2.0 + 0.4 / 3.0)), 1e-15);
  double prev = 0.0;
  for (double lh = 0; lh < 40; lh += 1) {
    const double p = TrainingSuboptimalityProb(20000, 0.25, lh, 0, 1, 0.1);
    EXPECT_GE(p, prev);
    EXPECT_LE(p, 1.0);
    prev = p;
  }
}

TEST(ExpectedErrorBoundsTest, Branches) {
  BoundInputs in;
  in.n = 1000;
  in.m = 1000;
  in.sigma2 = 0.05;
  in.epsilon = 0.1;
  auto e = ComputeExpectedErrorBounds(in);
  EXPECT_EQ(e.branch, GapBranch::kExponential);
  const double eta = 4.0 / 3.0;
  EXPECT_DOUBLE_EQ(e.validation_gap, 4 * eta / 1000 * std::exp(-1000 * 0.05 / (2 * eta)));
  EXPECT_NEAR(e.training_gap,
              8 * (1 + eta) / 1000 * std::exp(-1000 * 0.05 / (4 * (1 + eta))), 1e-15);

  in.sigma2 = 0.2;
  e = ComputeExpectedErrorBounds(in);
  EXPECT_EQ(e.branch, GapBranch::kErf);
  const double r = std::sqrt(2 * 0.2 * eta / 1000);
  EXPECT_NEAR(e.validation_gap,
              r * std::sqrt(std::numbers::pi) * static_cast<double>(SeriesErf(0.2 / r)),
              1e-12);
}

TEST(ExpectedErrorBoundsTest, Asymptotics) {
  BoundInputs in;
  in.sigma2 = 0.2;
  in.epsilon = 0.1;
  double prev = 1e9;
  for (std::uint64_t n = 10; n < 10000000; n *= 10) {
    in.n = n;
    in.m = n;
    const auto e = ComputeExpectedErrorBounds(in);
    EXPECT_LT(e.validation_gap, prev);
    prev = e.validation_gap;
  }
  EXPECT_LT(prev, 2e-3);
  // O(1/sqrt(n)) in the erf branch.
  in.n = 100000;
  const double g1 = ComputeExpectedErrorBounds(in).validation_gap;
  in.n = 400000;
  const double g4 = ComputeExpectedErrorBounds(in).validation_gap;
  EXPECT_NEAR(g1 / g4, 2.0, 0.2);
  in.m = 100000;
  const double t1 = ComputeExpectedErrorBounds(in).training_gap;
  in.m = 400000;
  const double t4 = ComputeExpectedErrorBounds(in).training_gap;
  EXPECT_NEAR(t1 / t4, 2.0, 0.2);
  // Linear in |H|.
  in.log_hypotheses = std::log(10.0);
  EXPECT_NEAR(ComputeExpectedErrorBounds(in).training_gap, 10 * t4, 1e-12);
}

TEST(SampleComplexityTest, WorkedExample) {
  const auto s = *SampleComplexity(0.1, 0.05, 0.025, 0.25, 0, 1, 0.0);
  EXPECT_EQ(s.n, 249u);
  EXPECT_EQ(s.n, static_cast<std::uint64_t>(
                     std::ceil((0.5 + 0.2 / 3) / 0.01 * std::log(80.0))));
  const double m = (2.0 + 0.4 / 3) / 0.01 * std::log(2.0 / 0.025);
  EXPECT_EQ(s.m, static_cast<std::uint64_t>(std::ceil(m)));
}

TEST(SampleComplexityTest, Monotonicity) {
  const auto base = *SampleComplexity(0.02, 0.05, 0.025, 0.25, 0, 1, 3.0);
  const auto half = *SampleComplexity(0.01, 0.05, 0.025, 0.25, 0, 1, 3.0);
  EXPECT_NEAR(static_cast<double>(half.n) / base.n, 4.0, 0.2);
  std::uint64_t prev_n = ~0ULL, prev_m = 0;
  for (double split = 0.001; split < 0.05; split += 0.001) {
    const auto s = *SampleComplexity(0.1, 0.05, split, 0.25, 0, 1, 3.0);
    EXPECT_LE(s.n, prev_n);
    EXPECT_GE(s.m, prev_m);
    prev_n = s.n;
    prev_m = s.m;
  }
  EXPECT_FALSE(SampleComplexity(0.1, 0.05, 0.05, 0.25, 0, 1, 0).ok());
  EXPECT_FALSE(SampleComplexity(0.1, 0.05, 0.06, 0.25, 0, 1, 0).ok());
  EXPECT_FALSE(SampleComplexity(0.0, 0.05, 0.01, 0.25, 0, 1, 0).ok());
}

TEST(BoundInputsTest, Validation) {
  BoundInputs in;
  EXPECT_TRUE(in.Validate().ok());
  in.sigma2 = 0.3;  // > (1 - 0)^2 / 4
  EXPECT_FALSE(in.Validate().ok());
  in.sigma2 = 0.25;
  in.split = in.delta;
  EXPECT_FALSE(in.Validate().ok());
  in.split = 0.01;
  EXPECT_TRUE(ComputeBoundReport(in).ok());
  EXPECT_NE(ComputeBoundReport(in)->ToJson().find("\"N\""), std::string::npos);
  EXPECT_DOUBLE_EQ(LogHypothesisCount(45, 2), 2 * std::log(45.0));
}

TEST(BoundsPropertyTest, RandomizedRanges) {
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  for (int i = 0; i < 500; ++i) {
    const double b = u(gen) * 4;
    const double s2 = WorstCaseVariance(0, b) * u(gen);
    const double eps = u(gen);
    const auto n = static_cast<std::uint64_t>(u(gen) * 5000) + 1;
    const double p = ValidationDeviationProb(n, s2, 0, b, eps);
    EXPECT_GE(p, 0.0);
    EXPECT_LE(p, 1.0);
    EXPECT_LE(ValidationDeviationProb(n + 100, s2, 0, b, eps), p);
    const double q = TrainingSuboptimalityProb(n, s2, u(gen) * 10, 0, b, eps);
    EXPECT_GE(q, 0.0);
    EXPECT_LE(q, 1.0);
  }
}

TEST(BoundsSoundnessTest, EmpiricalDeviationFrequency) {
  const auto ab4 = Alphabet::Indexed(4);
  const auto prior = Prior::Uniform(Alphabet::Indexed(2));
  const auto channel = *Channel::Create(
      Alphabet::Indexed(2), ab4, Matrix{{0.4, 0.3, 0.2, 0.1}, {0.1, 0.2, 0.3, 0.4}});
  const auto gain = GainFunction::Identity(Alphabet::Indexed(2));
  const auto joint = *JointFrom(prior, channel);
  const StrategyClassifier f({{0, 0, 1, 1}}, 2);
  const double vf = *StrategyGain({{0, 0, 1, 1}}, joint, gain);
  const double s2 = vf * (1 - vf);  // Bernoulli gain
  constexpr int kRuns = 2000;
  constexpr std::uint64_t kN = 100;
  constexpr double kEps = 0.1;
  int hits = 0;
  for (int r = 0; r < kRuns; ++r) {
    const double est = *EmpiricalFunctional(f, *SampleJoint(joint, kN, 77, r), gain);
    hits += std::abs(est - vf) >= kEps;
  }
  const double freq = static_cast<double>(hits) / kRuns;
  const double bound = ValidationDeviationProb(kN, s2, 0, 1, kEps);
  EXPECT_LE(freq, bound + 3 * std::sqrt(bound * (1 - bound) / kRuns));
}

}  // namespace
}  // namespace gleak
