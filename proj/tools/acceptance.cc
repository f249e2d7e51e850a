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


#include "acceptance.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "Eigen/Core"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "gleak/bounds.h"
#include "gleak/classifier.h"
#include "gleak/estimation.h"
#include "gleak/harness/config.h"
#include "gleak/harness/trial_matrix.h"
#include "gleak/knn.h"
#include "gleak/mlp.h"
#include "gleak/preprocess.h"
#include "gleak/qif.h"
#include "gleak/rng.h"
#include "gleak/sampling.h"
#include "gleak/scenarios/geometric.h"
#include "gleak/scenarios/location.h"
#include "gleak/scenarios/password.h"
#include "gleak/status_macros.h"

namespace gleak::acceptance {
namespace {

using Clock = std::chrono::steady_clock;

// A criterion either passes with a detail line, fails with one, or cannot be
// evaluated (error status, reported as a failure).
struct Verdict {
  bool pass = false;
  std::string detail;
};

using Check = std::function<absl::StatusOr<Verdict>(const Options&)>;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

void Log(const Options& o, const std::string& line) {
  if (o.log != nullptr) *o.log << line << std::endl;
}

// Random stochastic vector of length n with entries bounded away from 0.
std::vector<double> RandomSimplex(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  double total = 0.0;
  for (double& x : v) total += x = 0.05 + rng.Uniform01();
  for (double& x : v) x /= total;
  return v;
}

struct Instance {
  Prior prior;
  Channel channel;
  GainFunction gain;
};

absl::StatusOr<Instance> RandomInstance(Rng& rng, std::size_t nx, std::size_t ny,
                                        std::size_t nw, int max_gain) {
  const Alphabet ax = Alphabet::Indexed(nx), ay = Alphabet::Indexed(ny),
                 aw = Alphabet::Indexed(nw);
  Matrix c(nx, ny);
  for (std::size_t x = 0; x < nx; ++x) {
    const auto row = RandomSimplex(rng, ny);
    for (std::size_t y = 0; y < ny; ++y) c(x, y) = row[y];
  }
  Matrix g(nw, nx);
  for (std::size_t w = 0; w < nw; ++w) {
    for (std::size_t x = 0; x < nx; ++x) {
      g(w, x) = static_cast<double>(rng.UniformIndex(max_gain + 1));
    }
  }
  // Keep the gain non-degenerate so that alpha and beta are positive.
  g(rng.UniformIndex(nw), rng.UniformIndex(nx)) = 1.0 + rng.UniformIndex(max_gain);
  GLEAK_ASSIGN_OR_RETURN(Prior prior, Prior::Create(ax, RandomSimplex(rng, nx)));
  GLEAK_ASSIGN_OR_RETURN(Channel channel, Channel::Create(ax, ay, std::move(c)));
  GLEAK_ASSIGN_OR_RETURN(GainFunction gain, GainFunction::Create(aw, ax, std::move(g)));
  return Instance{std::move(prior), std::move(channel), std::move(gain)};
}

absl::StatusOr<Verdict> ExactValue(const Options&) {
  const auto start = Clock::now();
  GLEAK_ASSIGN_OR_RETURN(TrialMatrixConfig config, ProfileConfig("multi-guess", "paper"));
  GLEAK_ASSIGN_OR_RETURN(ScenarioInstance s, BuildScenario(config));
  GLEAK_ASSIGN_OR_RETURN(double v, PosteriorVulnerability(s.prior, *s.matrix, s.gain));
  const double secs = Seconds(start);
  const bool pass = s.matrix->output().size() == 16000 &&
                    s.gain.num_guesses() == 45 && std::abs(v - 0.892) <= 1e-3 &&
                    secs < 10.0;
  return Verdict{pass, absl::StrFormat("V_g=%.6f |Y|=%d in %.3fs (target 0.892+-0.001, <10s)",
                                       v, s.matrix->output().size(), secs)};
}

absl::StatusOr<Verdict> PreprocessEqualities(const Options& o) {
  Rng rng(o.seed, StreamId({StreamTag("acceptance-2")}));
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t nx = 1 + rng.UniformIndex(8), ny = 1 + rng.UniformIndex(8),
                      nw = 1 + rng.UniformIndex(8);
    GLEAK_ASSIGN_OR_RETURN(Instance in, RandomInstance(rng, nx, ny, nw, 5));
    GLEAK_ASSIGN_OR_RETURN(double vg,
                           PosteriorVulnerability(in.prior, in.channel, in.gain));
    GLEAK_ASSIGN_OR_RETURN(DataPreprocDerivation d,
                           IdealDerivation(in.prior, in.channel, in.gain));
    const GainFunction id_w = GainFunction::Identity(d.xi.alphabet());
    GLEAK_ASSIGN_OR_RETURN(double v_data, PosteriorVulnerability(d.xi, d.e, id_w));
    GLEAK_ASSIGN_OR_RETURN(ChannelPreprocDerivation c,
                           ChannelPreprocess(in.prior, in.gain));
    GLEAK_ASSIGN_OR_RETURN(Channel rc, Compose(c.r, in.channel));
    GLEAK_ASSIGN_OR_RETURN(double v_chan,
                           PosteriorVulnerability(c.tau, rc,
                                                  GainFunction::Identity(c.tau.alphabet())));
    worst = std::max({worst, std::abs(vg - d.alpha * v_data),
                      std::abs(vg - c.beta * v_chan)});
  }
  return Verdict{worst <= 1e-9,
                 absl::StrFormat("max |V_g - alpha V(xi,E)|, |V_g - beta V(tau,RC)| = "
                                 "%.3g over 100 instances (tol 1e-9)",
                                 worst)};
}

absl::StatusOr<Verdict> OracleEquivalence(const Options& o) {
  Rng rng(o.seed, StreamId({StreamTag("acceptance-3")}));
  double worst = 0.0;
  int done = 0;
  while (done < 100) {
    const std::size_t nx = 1 + rng.UniformIndex(6), ny = 1 + rng.UniformIndex(7),
                      nw = 1 + rng.UniformIndex(6);
    if (std::pow(static_cast<double>(nw), static_cast<double>(ny)) > 1e6) continue;
    GLEAK_ASSIGN_OR_RETURN(Instance in, RandomInstance(rng, nx, ny, nw, 5));
    GLEAK_ASSIGN_OR_RETURN(double fast,
                           PosteriorVulnerability(in.prior, in.channel, in.gain));
    GLEAK_ASSIGN_OR_RETURN(double brute,
                           EnumerateStrategiesVulnerability(in.prior, in.channel, in.gain));
    worst = std::max(worst, std::abs(fast - brute));
    ++done;
  }
  return Verdict{worst <= 1e-12,
                 absl::StrFormat("max |closed form - enumeration| = %.3g over 100 "
                                 "instances (tol 1e-12)",
                                 worst)};
}

absl::StatusOr<Verdict> Combinatorics(const Options& o) {
  GLEAK_ASSIGN_OR_RETURN(GainFunction two, TwoTriesGain(10));
  GLEAK_ASSIGN_OR_RETURN(TrialMatrixConfig config, ProfileConfig("multi-guess", "desk"));
  GLEAK_ASSIGN_OR_RETURN(ScenarioInstance s, BuildScenario(config));
  constexpr std::size_t kPairs = 5000;
  GLEAK_ASSIGN_OR_RETURN(SampleSet train, SampleJoint(s.prior, *s.channel, kPairs, o.seed,
                                                      StreamId({StreamTag("acceptance-4")})));
  GLEAK_ASSIGN_OR_RETURN(WeightedSampleSet expanded, DataPreprocess(train, s.gain));
  const double factor = static_cast<double>(expanded.total_weight()) / kPairs;

  const GridScenarioConfig grid;
  GLEAK_ASSIGN_OR_RETURN(GainFunction diamond, DiamondGain(grid));
  bool diamond_ok = true;
  std::size_t interior = 0;
  for (std::size_t r = 2; r + 2 < grid.rows; ++r) {
    for (std::size_t c = 2; c + 2 < grid.cols; ++c) {
      const std::size_t x = r * grid.cols + c;
      double col = 0.0, row = 0.0;
      for (std::size_t w = 0; w < diamond.num_guesses(); ++w) col += diamond(w, x);
      for (std::size_t v = 0; v < diamond.num_secrets(); ++v) row += diamond(x, v);
      diamond_ok = diamond_ok && col == 20.0 && row == 20.0;
      ++interior;
    }
  }
  const bool pass = two.num_guesses() == 45 && s.gain.num_guesses() == 45 &&
                    expanded.total_weight() == 9 * kPairs && diamond_ok;
  return Verdict{pass, absl::StrFormat("|W|=%d, expansion %.6gx, diamond sum 20 on %d "
                                       "interior cells: %s",
                                       two.num_guesses(), factor, interior,
                                       diamond_ok ? "yes" : "no")};
}

TrainingBatch RandomBatch(Rng& rng, std::size_t in, std::size_t out, std::size_t n) {
  TrainingBatch b;
  b.features.resize(in, n);
  b.targets.resize(out, n);
  b.weights.resize(n);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t r = 0; r < in; ++r) b.features(r, c) = 4.0 * rng.Uniform01() - 2.0;
    const auto t = RandomSimplex(rng, out);
    for (std::size_t r = 0; r < out; ++r) b.targets(r, c) = t[r];
    b.weights(c) = 0.2 + 2.0 * rng.Uniform01();
  }
  return b;
}

// Sums the tallies of every indexed observable no farther than the k-th
// nearest one; heaviest guess wins, lowest index on ties.
std::size_t OracleVote(const KnnClassifier& knn, const DistanceMetric& metric,
                       const Observable& y) {
  std::vector<std::uint64_t> keys;
  for (const auto& obs : knn.observables()) keys.push_back(metric.RankKey(y, obs));
  std::vector<std::uint64_t> sorted = keys;
  std::sort(sorted.begin(), sorted.end());
  const std::uint64_t kth = sorted[std::min(knn.k(), sorted.size()) - 1];
  std::vector<std::uint64_t> votes(knn.num_guesses(), 0);
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (keys[i] > kth) continue;
    for (std::size_t w = 0; w < knn.num_guesses(); ++w) votes[w] += knn.tally(i, w);
  }
  return static_cast<std::size_t>(std::max_element(votes.begin(), votes.end()) -
                                  votes.begin());
}

absl::StatusOr<Verdict> LearnerValidity(const Options& o) {
  Rng rng(o.seed, StreamId({StreamTag("acceptance-5")}));
  double worst_grad = 0.0;
  for (int a = 0; a < 10; ++a) {
    const std::size_t in = 1 + rng.UniformIndex(3), out = 2 + rng.UniformIndex(3);
    std::vector<std::size_t> hidden{1 + rng.UniformIndex(4)};
    if (a % 2 == 1) hidden.push_back(1 + rng.UniformIndex(4));
    GLEAK_ASSIGN_OR_RETURN(MlpNetwork net, MlpNetwork::Create(in, hidden, out, rng));
    // Random biases keep pre-activations off the ReLU kink.
    std::vector<double> params(net.num_parameters());
    for (double& p : params) p = 2.0 * rng.Uniform01() - 1.0;
    net.SetFlatParameters(params);
    worst_grad = std::max(worst_grad, GradientCheck(net, RandomBatch(rng, in, out, 5)));
  }

  // k rule over every index size up to 10^5.
  bool k_rule = true;
  for (std::size_t l = 1; l <= 100000; ++l) {
    const auto expected = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::floor(std::log(static_cast<double>(l)))));
    k_rule = k_rule && KnnNeighbourCount(l) == expected;
  }

  // Crafted fixtures: distance ties include every equidistant neighbour, vote
  // ties go to the lowest guess.
  const DistanceMetric absolute{MetricKind::kAbsoluteNumeric,
                                *FeatureCodec::Uniform(1, 1.0)};
  auto set = [](std::size_t nw, std::vector<WeightedSample> e) {
    return WeightedSampleSet::Create(Alphabet::Indexed(nw), std::move(e));
  };
  GLEAK_ASSIGN_OR_RETURN(WeightedSampleSet equidistant,
                         set(2, {{0, Observable(3), 2}, {1, Observable(7), 3}}));
  GLEAK_ASSIGN_OR_RETURN(KnnClassifier eq, KnnClassifier::Train(equidistant, absolute));
  GLEAK_ASSIGN_OR_RETURN(WeightedSampleSet tied,
                         set(3, {{2, Observable(4), 2}, {1, Observable(4), 2}}));
  GLEAK_ASSIGN_OR_RETURN(KnnClassifier tie, KnnClassifier::Train(tied, absolute));
  bool ties = eq.k() == 1 && eq.Predict(Observable(5)) == 1 &&
              eq.Predict(Observable(4)) == 0 && tie.Predict(Observable(4)) == 1;

  // Exhaustive query sweep against the brute-force vote on random fixtures.
  std::size_t mismatches = 0, queries = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const bool scalar = trial % 2 == 0;
    std::vector<WeightedSample> entries;
    for (int i = 0; i < 30; ++i) {
      const std::int64_t v[] = {static_cast<std::int64_t>(rng.UniformIndex(7)),
                                static_cast<std::int64_t>(rng.UniformIndex(7))};
      Observable y = scalar ? Observable(v[0]) : *Observable::Tuple(v);
      entries.push_back({rng.UniformIndex(4), y, 1 + rng.UniformIndex(4)});
    }
    GLEAK_ASSIGN_OR_RETURN(WeightedSampleSet data, set(4, entries));
    for (MetricKind kind : {MetricKind::kEuclidean, MetricKind::kManhattan}) {
      const DistanceMetric metric{kind, *FeatureCodec::Uniform(scalar ? 1 : 2, 7.0)};
      GLEAK_ASSIGN_OR_RETURN(KnnClassifier knn, KnnClassifier::Train(data, metric));
      for (std::int64_t a = -2; a < 9; ++a) {
        for (std::int64_t b = -2; b < (scalar ? -1 : 9); ++b) {
          const std::int64_t q[] = {a, b};
          const Observable y = scalar ? Observable(a) : *Observable::Tuple(q);
          mismatches += knn.Predict(y) != OracleVote(knn, metric, y);
          ++queries;
        }
      }
    }
  }
  const bool pass = worst_grad <= 1e-4 && k_rule && ties && mismatches == 0;
  return Verdict{pass, absl::StrFormat("max gradient rel. error %.3g (tol 1e-4); k rule %s; "
                                       "tie fixtures %s; %d/%d oracle mismatches",
                                       worst_grad, k_rule ? "ok" : "broken",
                                       ties ? "ok" : "broken", mismatches, queries)};
}

double Median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 == 1 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

const CellMetrics* FindCell(const MetricsReport& r, EstimationMethod method,
                            std::size_t m) {
  for (const CellMetrics& c : r.cells) {
    if (c.method == method && c.m == m) return &c;
  }
  return nullptr;
}

// Diagonal of the I x J matrix: replica i pairs training set i with
// validation set i, so replicas share no samples.
std::vector<double> Replicas(const CellMetrics& c) {
  std::vector<double> d;
  for (std::size_t i = 0; i < c.training_sets; ++i) d.push_back(c.delta(i, i));
  return d;
}

absl::StatusOr<Verdict> EstimationQuality(const Options& o) {
  const auto start = Clock::now();
  GLEAK_ASSIGN_OR_RETURN(TrialMatrixConfig config, ProfileConfig("multi-guess", "desk"));
  config.methods = {EstimationMethod::kDataPreproc, EstimationMethod::kFrequentist};
  config.learners = {LearnerKind::kMlp};
  config.sizes = {2000, 10000};
  config.training_sets = o.replicas;
  config.validation_sets = o.replicas;
  config.validation_size = 10000;
  config.master_seed = o.seed;
  config.workers = o.workers;
  GLEAK_ASSIGN_OR_RETURN(MetricsReport report,
                         RunTrialMatrix(config, [&](std::string_view line) {
                           Log(o, absl::StrCat("  [6] ", std::string(line)));
                         }));
  const CellMetrics* ann10 = FindCell(report, EstimationMethod::kDataPreproc, 10000);
  const CellMetrics* ann2 = FindCell(report, EstimationMethod::kDataPreproc, 2000);
  const CellMetrics* freq2 = FindCell(report, EstimationMethod::kFrequentist, 2000);
  if (ann10 == nullptr || ann2 == nullptr || freq2 == nullptr) {
    return absl::InternalError("trial matrix is missing a cell");
  }
  const double med_ann10 = Median(Replicas(*ann10));
  const double med_ann2 = Median(Replicas(*ann2));
  const double med_freq2 = Median(Replicas(*freq2));
  const double secs = Seconds(start);
  const bool pass = med_ann10 <= 0.05 && med_freq2 > med_ann2 && secs <= 1800.0;
  return Verdict{pass,
                 absl::StrFormat("|Y|=%d, %d replicas: ANN median delta %.4f at m=n=10K "
                                 "(<=0.05); m=2K frequentist %.4f vs ANN %.4f; %.0fs",
                                 config.geometric.output_size(), o.replicas, med_ann10,
                                 med_freq2, med_ann2, secs)};
}

absl::StatusOr<Verdict> PartitionCoincidence(const Options& o) {
  const PasswordScenarioConfig config;
  GLEAK_ASSIGN_OR_RETURN(ScenarioInstance s, PasswordScenario(config));
  GLEAK_ASSIGN_OR_RETURN(ChannelPreprocDerivation d, PasswordPreprocess(config));
  constexpr std::size_t kSamples = 100000;
  GLEAK_ASSIGN_OR_RETURN(SampleSet train,
                         SampleJoint(s.prior, *s.channel, kSamples, o.seed,
                                     StreamId({StreamTag("acceptance-7"), 0})));
  GLEAK_ASSIGN_OR_RETURN(WeightedSampleSet data, DataPreprocess(train, s.gain));
  GLEAK_ASSIGN_OR_RETURN(WeightedSampleSet chan,
                         SampleChannelPreprocessed(d, *s.channel, kSamples, o.seed,
                                                   StreamId({StreamTag("acceptance-7"), 1})));
  GLEAK_ASSIGN_OR_RETURN(double tv, TotalVariation(data, chan));
  GLEAK_ASSIGN_OR_RETURN(Channel rc, Compose(d.r, *s.matrix));
  double worst_row = 0.0;
  for (std::size_t w = 0; w < rc.input().size(); ++w) {
    double total = 0.0;
    for (std::size_t y = 0; y < rc.output().size(); ++y) {
      if (rc(w, y) < 0.0) worst_row = 1.0;
      total += rc(w, y);
    }
    worst_row = std::max(worst_row, std::abs(total - 1.0));
  }
  const bool shape = rc.input().size() == 2 && rc.output().size() == 128;
  const bool pass = tv < 0.02 && shape && worst_row <= 1e-12;
  return Verdict{pass, absl::StrFormat("TV(data, channel) = %.4f at 1e5 samples (<0.02); "
                                       "RC %dx%d, max |row sum - 1| = %.2g",
                                       tv, rc.input().size(), rc.output().size(),
                                       worst_row)};
}

absl::StatusOr<Verdict> Bounds(const Options& o) {
  // Sample sizes against a direct evaluation of the two ceilings.
  std::size_t checked = 0, mismatches = 0;
  for (double eps : {0.005, 0.01, 0.05, 0.1, 0.3}) {
    for (double delta : {0.01, 0.05, 0.2}) {
      for (double split_frac : {0.1, 0.5, 0.9}) {
        for (double b : {1.0, 2.0, 5.0}) {
          for (double s2_frac : {0.1, 0.5, 1.0}) {
            for (double log_h : {0.0, 3.0, 1600 * std::log(45.0)}) {
              const double split = delta * split_frac;
              const double s2 = s2_frac * b * b / 4.0;
              auto got = SampleComplexity(eps, delta, split, s2, 0.0, b, log_h);
              if (!got.ok()) return got.status();
              const double m = std::ceil((8 * s2 + 4 * b * eps / 3) / (eps * eps) *
                                         (std::log(2.0) + log_h - std::log(delta - split)));
              const double n = std::ceil((2 * s2 + 2 * b * eps / 3) / (eps * eps) *
                                         std::log(2.0 / split));
              mismatches += static_cast<double>(got->m) != m ||
                            static_cast<double>(got->n) != n;
              ++checked;
            }
          }
        }
      }
    }
  }

  // Tiny instance: empirical deviation frequency of a fixed strategy.
  const Alphabet two = Alphabet::Indexed(2);
  const Prior prior = Prior::Uniform(two);
  GLEAK_ASSIGN_OR_RETURN(Channel channel,
                         Channel::Create(two, Alphabet::Indexed(4),
                                         Matrix{{0.4, 0.3, 0.2, 0.1},
                                                {0.1, 0.2, 0.3, 0.4}}));
  const GainFunction gain = GainFunction::Identity(two);
  GLEAK_ASSIGN_OR_RETURN(JointDistribution joint, JointFrom(prior, channel));
  const Strategy strategy{{0, 0, 1, 1}};
  const StrategyClassifier f(strategy, 2);
  GLEAK_ASSIGN_OR_RETURN(double vf, StrategyGain(strategy, joint, gain));
  const double s2 = vf * (1 - vf);
  constexpr int kRuns = 2000;
  constexpr std::uint64_t kN = 100;
  bool sound = true;
  std::vector<std::string> cases;
  for (double eps : {0.05, 0.1, 0.15}) {
    int hits = 0;
    for (int r = 0; r < kRuns; ++r) {
      GLEAK_ASSIGN_OR_RETURN(SampleSet sample,
                             SampleJoint(joint, kN, o.seed,
                                         StreamId({StreamTag("acceptance-8"), static_cast<std::uint64_t>(r)})));
      GLEAK_ASSIGN_OR_RETURN(double est, EmpiricalFunctional(f, sample, gain));
      hits += std::abs(est - vf) >= eps;
    }
    const double freq = static_cast<double>(hits) / kRuns;
    const double bound = ValidationDeviationProb(kN, s2, 0, 1, eps);
    const double slack = 3 * std::sqrt(bound * (1 - bound) / kRuns);
    sound = sound && freq <= bound + slack;
    cases.push_back(absl::StrFormat("eps=%.2f: %.4f vs %.4f", eps, freq, bound));
  }
  return Verdict{mismatches == 0 && sound,
                 absl::StrFormat("%d/%d sample-size mismatches; deviation frequency vs "
                                 "bound over %d runs: %s",
                                 mismatches, checked, kRuns, absl::StrJoin(cases, ", "))};
}

absl::StatusOr<std::string> EmitAndRead(const MetricsReport& report,
                                        const std::string& prefix) {
  GLEAK_RETURN_IF_ERROR(EmitReports(report, prefix));
  std::string all;
  for (const char* suffix : {".summary.json", ".trials.csv", ".boxplot.csv"}) {
    std::ifstream in(prefix + suffix, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    all += ss.str();
  }
  return all;
}

absl::StatusOr<Verdict> MetricsIdentity(const Options& o) {
  GLEAK_ASSIGN_OR_RETURN(TrialMatrixConfig config, ProfileConfig("multi-guess", "desk"));
  config.learners = {LearnerKind::kKnn, LearnerKind::kMlp};
  config.mlp_data.epochs = {5};
  config.mlp_channel.epochs = {5};
  config.sizes = {500, 1500};
  config.training_sets = 2;
  config.validation_sets = 3;
  config.validation_size = 1000;
  config.master_seed = o.seed;
  const auto dir = std::filesystem::temp_directory_path() /
                   absl::StrCat("leak-acceptance-", o.seed);
  std::vector<std::string> bodies;
  double worst = 0.0;
  std::size_t cells = 0;
  // Worker counts differ between the runs; completion order must not matter.
  for (std::size_t workers : {std::size_t{1}, std::size_t{4}}) {
    config.workers = workers;
    GLEAK_ASSIGN_OR_RETURN(MetricsReport report, RunTrialMatrix(config, nullptr));
    for (const CellMetrics& c : report.cells) {
      worst = std::max(worst, std::abs(c.dispersion * c.dispersion + c.mean * c.mean -
                                       c.total_error * c.total_error));
      ++cells;
    }
    GLEAK_ASSIGN_OR_RETURN(
        std::string body,
        EmitAndRead(report, (dir / absl::StrCat("run", bodies.size())).string()));
    bodies.push_back(std::move(body));
  }
  std::filesystem::remove_all(dir);
  const bool identical = bodies[0] == bodies[1];
  return Verdict{worst <= 1e-12 && identical,
                 absl::StrFormat("max |disp^2 + mean^2 - total^2| = %.3g over %d cells "
                                 "(tol 1e-12); reports byte-identical across reruns: %s",
                                 worst, cells, identical ? "yes" : "no")};
}

}  // namespace

std::vector<Outcome> Run(const Options& options, std::ostream& out) {
  const std::vector<std::pair<int, Check>> checks = {
      {1, ExactValue},         {2, PreprocessEqualities}, {3, OracleEquivalence},
      {4, Combinatorics},      {5, LearnerValidity},      {6, EstimationQuality},
      {7, PartitionCoincidence}, {8, Bounds},             {9, MetricsIdentity}};
  std::vector<Outcome> outcomes;
  for (const auto& [id, check] : checks) {
    if (!options.criteria.empty() && !options.criteria.contains(id)) continue;
    Log(options, absl::StrCat("criterion ", id, " ..."));
    const auto start = Clock::now();
    absl::StatusOr<Verdict> v = check(options);
    Outcome o{id, v.ok() && v->pass,
              v.ok() ? v->detail : absl::StrCat("error: ", v.status().ToString()),
              Seconds(start)};
    out << (o.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << o.detail
        << absl::StrFormat(" [%.1fs]", o.seconds) << std::endl;
    outcomes.push_back(std::move(o));
  }
  return outcomes;
}

}  // namespace gleak::acceptance
