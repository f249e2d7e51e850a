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

#ifndef GLEAK_QIF_H_
#define GLEAK_QIF_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "absl/status/statusor.h"
#include "gleak/alphabet.h"
#include "gleak/matrix.h"

namespace gleak {

// Absolute tolerance for probability vectors and stochastic rows.
inline constexpr double kStochasticTolerance = 1e-9;

// Probability distribution over a secret alphabet.
class Prior {
 public:
  static absl::StatusOr<Prior> Create(Alphabet alphabet,
                                      std::vector<double> probs);
  static Prior Uniform(Alphabet alphabet);

  const Alphabet& alphabet() const { return alphabet_; }
  const std::vector<double>& probs() const { return probs_; }
  double operator[](std::size_t i) const { return probs_[i]; }
  std::size_t size() const { return probs_.size(); }

 private:
  Prior(Alphabet alphabet, std::vector<double> probs)
      : alphabet_(std::move(alphabet)), probs_(std::move(probs)) {}

  Alphabet alphabet_;
  std::vector<double> probs_;
};

// Row-stochastic matrix of P(y | x).
class Channel {
 public:
  static absl::StatusOr<Channel> Create(Alphabet input, Alphabet output,
                                        Matrix rows);
  // Noiseless channel on `alphabet`.
  static Channel Identity(const Alphabet& alphabet);

  const Alphabet& input() const { return input_; }
  const Alphabet& output() const { return output_; }
  const Matrix& matrix() const { return rows_; }
  double operator()(std::size_t x, std::size_t y) const { return rows_(x, y); }

 private:
  Channel(Alphabet input, Alphabet output, Matrix rows)
      : input_(std::move(input)), output_(std::move(output)),
        rows_(std::move(rows)) {}

  Alphabet input_;
  Alphabet output_;
  Matrix rows_;
};

// Gain g(w, x) of guess w when the secret is x, stored as a |W| x |X| matrix.
//
// Matrices with negative entries are shifted by -min g so that every stored
// entry is non-negative. `offset()` records the shift; subtract it from any
// vulnerability computed with this gain to express it in the original units.
class GainFunction {
 public:
  static absl::StatusOr<GainFunction> Create(Alphabet guesses, Alphabet secrets,
                                             Matrix gains);
  // g_id: W = X, g(w, x) = [w == x].
  static GainFunction Identity(const Alphabet& secrets);

  const Alphabet& guesses() const { return guesses_; }
  const Alphabet& secrets() const { return secrets_; }
  const Matrix& matrix() const { return gains_; }
  double operator()(std::size_t w, std::size_t x) const { return gains_(w, x); }
  std::size_t num_guesses() const { return gains_.rows(); }
  std::size_t num_secrets() const { return gains_.cols(); }

  // Range [a, b] of the (shifted) gain entries.
  double min() const { return min_; }
  double max() const { return max_; }
  double offset() const { return offset_; }

  bool IsIntegerValued() const;

 private:
  GainFunction(Alphabet guesses, Alphabet secrets, Matrix gains, double offset);

  Alphabet guesses_;
  Alphabet secrets_;
  Matrix gains_;
  double min_ = 0.0;
  double max_ = 0.0;
  double offset_ = 0.0;
};

// Joint distribution P_XY = pi |> C.
class JointDistribution {
 public:
  static absl::StatusOr<JointDistribution> Create(Alphabet secrets,
                                                  Alphabet observables,
                                                  Matrix probs);

  const Alphabet& secrets() const { return secrets_; }
  const Alphabet& observables() const { return observables_; }
  const Matrix& matrix() const { return probs_; }
  double operator()(std::size_t x, std::size_t y) const { return probs_(x, y); }

 private:
  JointDistribution(Alphabet secrets, Alphabet observables, Matrix probs)
      : secrets_(std::move(secrets)), observables_(std::move(observables)),
        probs_(std::move(probs)) {}

  Alphabet secrets_;
  Alphabet observables_;
  Matrix probs_;
};

// A total function f : Y -> W on a finite observable alphabet.
struct Strategy {
  std::vector<std::size_t> guess_for_observable;

  std::size_t operator()(std::size_t y) const { return guess_for_observable[y]; }
  std::size_t size() const { return guess_for_observable.size(); }
};

enum class LeakageMode { kMultiplicative, kAdditive };

// V_g(pi) = max_w sum_x pi_x g(w, x).
absl::StatusOr<double> PriorVulnerability(const Prior& prior,
                                          const GainFunction& gain);

// V_g(pi, C) = sum_y max_w sum_x pi_x C_xy g(w, x).
absl::StatusOr<double> PosteriorVulnerability(const Prior& prior,
                                              const Channel& channel,
                                              const GainFunction& gain);

// Multiplicative: V_g(pi, C) / V_g(pi); additive: V_g(pi, C) - V_g(pi).
absl::StatusOr<double> Leakage(const Prior& prior, const Channel& channel,
                               const GainFunction& gain, LeakageMode mode);

// Expected gain V(f) = sum_{x,y} g(f(y), x) P_XY(x, y).
absl::StatusOr<double> StrategyGain(const Strategy& strategy,
                                    const JointDistribution& joint,
                                    const GainFunction& gain);

// Per-observable argmax_w sum_x pi_x C_xy g(w, x), lowest guess on ties.
absl::StatusOr<Strategy> OptimalStrategy(const Prior& prior,
                                         const Channel& channel,
                                         const GainFunction& gain);

inline constexpr std::uint64_t kDefaultEnumerationCap = 1'000'000;

// Brute-force max over all |W|^|Y| strategies of StrategyGain. Intended as an
// independent check of PosteriorVulnerability on small instances.
absl::StatusOr<double> EnumerateStrategiesVulnerability(
    const Prior& prior, const Channel& channel, const GainFunction& gain,
    std::uint64_t cap = kDefaultEnumerationCap);

absl::StatusOr<JointDistribution> JointFrom(const Prior& prior,
                                            const Channel& channel);

}  // namespace gleak

#endif  // GLEAK_QIF_H_
