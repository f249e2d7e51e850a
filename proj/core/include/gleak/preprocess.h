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

#ifndef GLEAK_PREPROCESS_H_
#define GLEAK_PREPROCESS_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "absl/status/statusor.h"
#include "gleak/alphabet.h"
#include "gleak/matrix.h"
#include "gleak/observable.h"
#include "gleak/qif.h"
#include "gleak/sampling.h"

namespace gleak {

struct WeightedSample {
  std::size_t guess = 0;
  Observable observable;
  std::uint64_t weight = 1;

  friend bool operator==(const WeightedSample&, const WeightedSample&) = default;
};

// A multiset of (guess, observable) pairs in compressed form: an entry with
// weight k stands for k identical copies. Every consumer treats it that way.
class WeightedSampleSet {
 public:
  WeightedSampleSet() = default;
  static absl::StatusOr<WeightedSampleSet> Create(
      Alphabet guesses, std::vector<WeightedSample> entries);

  // Groups unit-weight (guess, observable) pairs, keeping first-appearance
  // order of distinct pairs.
  static absl::StatusOr<WeightedSampleSet> FromPairs(
      Alphabet guesses, const std::vector<LabeledSample>& pairs);

  const Alphabet& guesses() const { return guesses_; }
  const std::vector<WeightedSample>& entries() const { return entries_; }
  std::uint64_t total_weight() const { return total_weight_; }
  bool empty() const { return entries_.empty(); }

 private:
  Alphabet guesses_;
  std::vector<WeightedSample> entries_;
  std::uint64_t total_weight_ = 0;
};

// For each distinct (x, y) with multiplicity u_xy and each
// guess w, contribute u_xy * g(w, x) copies of (w, y). The gain must be
// integer-valued (see RationalizeGain).
absl::StatusOr<WeightedSampleSet> DataPreprocess(const SampleSet& train,
                                                 const GainFunction& gain);

struct RationalizedGain {
  GainFunction gain;       // K * G, integer-valued
  std::uint64_t scale = 1; // K
};

inline constexpr std::uint64_t kDefaultMaxDenominator = 1'000'000;

// Snaps each gain entry to a rational p/q with q <= max_denominator (it must
// agree with the entry to 1e-9 relative), then multiplies the matrix by the
// lcm K of the denominators. Vulnerabilities computed with the result are K
// times the original ones. Fails when K or the largest scaled entry exceeds
// `expansion_cap`; callers should then use channel pre-processing.
absl::StatusOr<RationalizedGain> RationalizeGain(
    const GainFunction& gain, std::uint64_t expansion_cap,
    std::uint64_t max_denominator = kDefaultMaxDenominator);

// Ideal counterpart of DataPreprocess on a known (pi, C):
//   U(w,y) = sum_x pi_x C_xy g(w,x),  alpha = sum U,
//   xi_w = sum_y U(w,y) / alpha,      E_wy = U(w,y) / (alpha xi_w).
// V_g(pi, C) == alpha * V_gid(xi, E).
struct DataPreprocDerivation {
  Matrix u;
  double alpha = 0.0;
  Prior xi;
  Channel e;
};

absl::StatusOr<DataPreprocDerivation> IdealDerivation(const Prior& prior,
                                                      const Channel& channel,
                                                      const GainFunction& gain);

// Channel pre-processing, built from (pi, g) only:
//   beta = sum_{x,w} pi_x g(w,x),  tau_w = sum_x pi_x g(w,x) / beta,
//   R_wx = pi_x g(w,x) / (beta tau_w).
// Rows with tau_w == 0 are uniform. V_g(pi, C) == beta * V_gid(tau, R C).
struct ChannelPreprocDerivation {
  double beta = 0.0;
  Prior tau;
  Channel r;
};

absl::StatusOr<ChannelPreprocDerivation> ChannelPreprocess(
    const Prior& prior, const GainFunction& gain);

// Matrix product of R : W -> X and C : X -> Y.
absl::StatusOr<Channel> Compose(const Channel& r, const Channel& c);

// Draws `count` pairs from tau |> RC using black-box access to C only:
// w ~ tau, x ~ R_w, y = C.Sample(x).
absl::StatusOr<WeightedSampleSet> SampleChannelPreprocessed(
    const ChannelPreprocDerivation& derivation, const SamplingChannel& channel,
    std::size_t count, std::uint64_t master_seed, std::uint64_t stream_id);

// Total variation distance between the normalized weights of two sets over
// (guess, observable) cells.
absl::StatusOr<double> TotalVariation(const WeightedSampleSet& a,
                                      const WeightedSampleSet& b);

// CSV "w_label,y_encoding,weight".
void WriteWeightedSampleSet(std::ostream& out, const WeightedSampleSet& set);
absl::StatusOr<WeightedSampleSet> ParseWeightedSampleSet(std::istream& in,
                                                         const Alphabet& guesses);

}  // namespace gleak

#endif  // GLEAK_PREPROCESS_H_
