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

#include "gleak/preprocess.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <string>
#include <unordered_map>

#include "absl/status/status.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "gleak/status_macros.h"
#include "string_compat.h"

namespace gleak {
namespace {

struct IndexedObservable {
  std::size_t index;
  Observable observable;
  friend bool operator==(const IndexedObservable&, const IndexedObservable&) = default;
};

struct IndexedObservableHash {
  std::size_t operator()(const IndexedObservable& k) const noexcept {
    return ObservableHash{}(k.observable) * 0x9e3779b97f4a7c15ULL ^ k.index;
  }
};

// Accumulates weights on (guess, observable) keys, remembering the order in
// which keys first appeared.
class WeightAccumulator {
 public:
  absl::Status Add(std::size_t guess, const Observable& y, std::uint64_t weight) {
    if (weight == 0) return absl::OkStatus();
    auto [it, inserted] = position_.try_emplace({guess, y}, entries_.size());
    if (inserted) {
      entries_.push_back({guess, y, 0});
    }
    auto& w = entries_[it->second].weight;
    if (w > std::numeric_limits<std::uint64_t>::max() - weight) {
      return absl::OutOfRangeError("weight overflow");
    }
    w += weight;
    return absl::OkStatus();
  }

  std::vector<WeightedSample> Release() { return std::move(entries_); }

 private:
  std::unordered_map<IndexedObservable, std::size_t, IndexedObservableHash> position_;
  std::vector<WeightedSample> entries_;
};

struct Fraction {
  std::uint64_t num;
  std::uint64_t den;
};

// Best continued-fraction convergent of v >= 0 with denominator <= max_den.
std::optional<Fraction> SnapToRational(double v, std::uint64_t max_den) {
  constexpr double kRelTol = 1e-9;
  const double tol = kRelTol * std::max(1.0, v);
  long double x = v;
  std::uint64_t h_prev = 0, h = 1;  // numerators
  std::uint64_t k_prev = 1, k = 0;  // denominators
  std::optional<Fraction> best;
  for (int iter = 0; iter < 64; ++iter) {
    const long double a_ld = std::floor(x);
    if (a_ld > 1e18L) break;
    const auto a = static_cast<std::uint64_t>(a_ld);
    if (k != 0 && a > (std::numeric_limits<std::uint64_t>::max() - k_prev) / k) break;
    const std::uint64_t h_next = a * h + h_prev;
    const std::uint64_t k_next = a * k + k_prev;
    if (k_next > max_den) break;
    h_prev = h;
    h = h_next;
    k_prev = k;
    k = k_next;
    best = Fraction{h, k};
    if (std::abs(v - static_cast<double>(h) / static_cast<double>(k)) <= tol * 1e-3) {
      break;
    }
    const long double frac = x - a_ld;
    if (frac < 1e-18L) break;
    x = 1.0L / frac;
  }
  if (!best) return std::nullopt;
  const double approx = static_cast<double>(best->num) / static_cast<double>(best->den);
  if (std::abs(v - approx) > tol) return std::nullopt;
  return best;
}

}  // namespace

absl::StatusOr<WeightedSampleSet> WeightedSampleSet::Create(
    Alphabet guesses, std::vector<WeightedSample> entries) {
  WeightedSampleSet set;
  for (const auto& e : entries) {
    if (e.weight == 0) {
      return absl::InvalidArgumentError("weighted sample weights must be >= 1");
    }
    if (e.guess >= guesses.size()) {
      return absl::InvalidArgumentError("weighted sample guess out of range");
    }
    if (set.total_weight_ > std::numeric_limits<std::uint64_t>::max() - e.weight) {
      return absl::OutOfRangeError("total weight overflow");
    }
    set.total_weight_ += e.weight;
  }
  set.guesses_ = std::move(guesses);
  set.entries_ = std::move(entries);
  return set;
}

absl::StatusOr<WeightedSampleSet> WeightedSampleSet::FromPairs(
    Alphabet guesses, const std::vector<LabeledSample>& pairs) {
  WeightAccumulator acc;
  for (const auto& p : pairs) GLEAK_RETURN_IF_ERROR(acc.Add(p.secret, p.observable, 1));
  return Create(std::move(guesses), acc.Release());
}

absl::StatusOr<WeightedSampleSet> DataPreprocess(const SampleSet& train,
                                                 const GainFunction& gain) {
  if (!(train.secrets() == gain.secrets())) {
    return absl::InvalidArgumentError("training/gain secret alphabets differ");
  }
  if (!gain.IsIntegerValued()) {
    return absl::InvalidArgumentError(
        "data pre-processing needs an integer-valued gain; rationalize it first");
  }
  // Step 2: multiplicities u_xy.
  std::unordered_map<IndexedObservable, std::size_t, IndexedObservableHash> slot;
  std::vector<std::pair<IndexedObservable, std::uint64_t>> counts;
  for (const auto& [x, y] : train.pairs()) {
    auto [it, inserted] = slot.try_emplace({x, y}, counts.size());
    if (inserted) counts.push_back({{x, y}, 0});
    ++counts[it->second].second;
  }
  // Step 3: u_xy * g(w, x) copies of (w, y).
  WeightAccumulator acc;
  for (const auto& [key, u] : counts) {
    for (std::size_t w = 0; w < gain.num_guesses(); ++w) {
      const auto g = static_cast<std::uint64_t>(gain(w, key.index));
      if (g != 0 && u > std::numeric_limits<std::uint64_t>::max() / g) {
        return absl::OutOfRangeError("weight overflow");
      }
      GLEAK_RETURN_IF_ERROR(acc.Add(w, key.observable, u * g));
    }
  }
  return WeightedSampleSet::Create(gain.guesses(), acc.Release());
}

absl::StatusOr<RationalizedGain> RationalizeGain(const GainFunction& gain,
                                                 std::uint64_t expansion_cap,
                                                 std::uint64_t max_denominator) {
  const Matrix& g = gain.matrix();
  std::vector<Fraction> fractions;
  fractions.reserve(g.data().size());
  std::uint64_t lcm = 1;
  for (double v : g.data()) {
    const auto f = SnapToRational(v, max_denominator);
    if (!f) {
      return absl::OutOfRangeError(absl::StrCat(
          "gain entry ", v, " has no rational form with denominator <= ",
          max_denominator));
    }
    lcm = std::lcm(lcm, f->den);
    if (lcm > expansion_cap) {
      return absl::ResourceExhaustedError(absl::StrCat(
          "gain scale factor ", lcm, " exceeds the expansion cap ", expansion_cap,
          "; use channel pre-processing"));
    }
    fractions.push_back(*f);
  }
  Matrix scaled(g.rows(), g.cols());
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    const auto [num, den] = fractions[i];
    const std::uint64_t mult = lcm / den;
    if (num != 0 && mult > expansion_cap / num) {
      return absl::ResourceExhaustedError(absl::StrCat(
          "scaled gain entry exceeds the expansion cap ", expansion_cap,
          "; use channel pre-processing"));
    }
    scaled(i / g.cols(), i % g.cols()) = static_cast<double>(num * mult);
  }
  GLEAK_ASSIGN_OR_RETURN(
      GainFunction out, GainFunction::Create(gain.guesses(), gain.secrets(), std::move(scaled)));
  return RationalizedGain{std::move(out), lcm};
}

absl::StatusOr<DataPreprocDerivation> IdealDerivation(const Prior& prior,
                                                      const Channel& channel,
                                                      const GainFunction& gain) {
  if (!(prior.alphabet() == channel.input()) ||
      !(prior.alphabet() == gain.secrets())) {
    return absl::InvalidArgumentError("prior/channel/gain alphabets differ");
  }
  const std::size_t nw = gain.num_guesses();
  const std::size_t ny = channel.output().size();
  Matrix u(nw, ny);
  for (std::size_t w = 0; w < nw; ++w) {
    for (std::size_t y = 0; y < ny; ++y) {
      KahanSum s;
      for (std::size_t x = 0; x < prior.size(); ++x) {
        s.Add(prior[x] * channel(x, y) * gain(w, x));
      }
      u(w, y) = s.value();
    }
  }
  const double alpha = KahanTotal(u.data());
  if (!(alpha > 0.0)) {
    return absl::FailedPreconditionError(
        "degenerate input: alpha == 0 (no pair with pi_x g(w,x) > 0)");
  }
  std::vector<double> xi(nw);
  Matrix e(nw, ny);
  for (std::size_t w = 0; w < nw; ++w) {
    const double row_total = KahanTotal(u.row(w));
    xi[w] = row_total / alpha;
    for (std::size_t y = 0; y < ny; ++y) {
      e(w, y) = row_total > 0.0 ? u(w, y) / row_total : 1.0 / ny;
    }
  }
  GLEAK_ASSIGN_OR_RETURN(Prior xi_prior, Prior::Create(gain.guesses(), std::move(xi)));
  GLEAK_ASSIGN_OR_RETURN(Channel e_channel,
                         Channel::Create(gain.guesses(), channel.output(), std::move(e)));
  return DataPreprocDerivation{std::move(u), alpha, std::move(xi_prior),
                               std::move(e_channel)};
}

absl::StatusOr<ChannelPreprocDerivation> ChannelPreprocess(
    const Prior& prior, const GainFunction& gain) {
  if (!(prior.alphabet() == gain.secrets())) {
    return absl::InvalidArgumentError("prior/gain alphabets differ");
  }
  const std::size_t nw = gain.num_guesses();
  const std::size_t nx = prior.size();
  std::vector<double> row_mass(nw);
  KahanSum beta_sum;
  for (std::size_t w = 0; w < nw; ++w) {
    KahanSum s;
    for (std::size_t x = 0; x < nx; ++x) s.Add(prior[x] * gain(w, x));
    row_mass[w] = s.value();
    beta_sum.Add(row_mass[w]);
  }
  const double beta = beta_sum.value();
  if (!(beta > 0.0)) {
    return absl::FailedPreconditionError(
        "degenerate input: beta == 0 (no pair with pi_x g(w,x) > 0)");
  }
  std::vector<double> tau(nw);
  Matrix r(nw, nx);
  for (std::size_t w = 0; w < nw; ++w) {
    tau[w] = row_mass[w] / beta;
    for (std::size_t x = 0; x < nx; ++x) {
      r(w, x) = row_mass[w] > 0.0 ? prior[x] * gain(w, x) / row_mass[w] : 1.0 / nx;
    }
  }
  GLEAK_ASSIGN_OR_RETURN(Prior tau_prior, Prior::Create(gain.guesses(), std::move(tau)));
  GLEAK_ASSIGN_OR_RETURN(Channel r_channel,
                         Channel::Create(gain.guesses(), gain.secrets(), std::move(r)));
  return ChannelPreprocDerivation{beta, std::move(tau_prior), std::move(r_channel)};
}

absl::StatusOr<Channel> Compose(const Channel& r, const Channel& c) {
  if (r.output().size() != c.input().size() || !(r.output() == c.input())) {
    return absl::InvalidArgumentError("compose: inner alphabets differ");
  }
  const std::size_t nw = r.input().size();
  const std::size_t nx = c.input().size();
  const std::size_t ny = c.output().size();
  Matrix out(nw, ny);
  for (std::size_t w = 0; w < nw; ++w) {
    for (std::size_t x = 0; x < nx; ++x) {
      const double rwx = r(w, x);
      if (rwx == 0.0) continue;
      const auto crow = c.matrix().row(x);
      auto orow = out.row(w);
      for (std::size_t y = 0; y < ny; ++y) orow[y] += rwx * crow[y];
    }
  }
  return Channel::Create(r.input(), c.output(), std::move(out));
}

absl::StatusOr<WeightedSampleSet> SampleChannelPreprocessed(
    const ChannelPreprocDerivation& derivation, const SamplingChannel& channel,
    std::size_t count, std::uint64_t master_seed, std::uint64_t stream_id) {
  if (count == 0) return absl::InvalidArgumentError("sample count must be >= 1");
  if (!(derivation.r.output() == channel.input())) {
    return absl::InvalidArgumentError("R output and channel input alphabets differ");
  }
  Rng rng(master_seed, stream_id);
  const CategoricalSampler guesses(derivation.tau.probs());
  std::vector<CategoricalSampler> rows;
  rows.reserve(derivation.r.input().size());
  for (std::size_t w = 0; w < derivation.r.input().size(); ++w) {
    rows.emplace_back(derivation.r.matrix().row(w));
  }
  WeightAccumulator acc;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t w = guesses.Sample(rng);
    const std::size_t x = rows[w].Sample(rng);
    GLEAK_RETURN_IF_ERROR(acc.Add(w, channel.Sample(x, rng), 1));
  }
  return WeightedSampleSet::Create(derivation.tau.alphabet(), acc.Release());
}

absl::StatusOr<double> TotalVariation(const WeightedSampleSet& a,
                                      const WeightedSampleSet& b) {
  if (!(a.guesses() == b.guesses())) {
    return absl::InvalidArgumentError("sample sets use different guess alphabets");
  }
  if (a.total_weight() == 0 || b.total_weight() == 0) {
    return absl::InvalidArgumentError("total variation of an empty set");
  }
  std::map<std::pair<std::size_t, Observable>, std::pair<double, double>> cells;
  const double wa = static_cast<double>(a.total_weight());
  const double wb = static_cast<double>(b.total_weight());
  for (const auto& e : a.entries()) {
    cells[{e.guess, e.observable}].first += static_cast<double>(e.weight) / wa;
  }
  for (const auto& e : b.entries()) {
    cells[{e.guess, e.observable}].second += static_cast<double>(e.weight) / wb;
  }
  KahanSum diff;
  for (const auto& [cell, p] : cells) diff.Add(std::abs(p.first - p.second));
  return diff.value() / 2.0;
}

void WriteWeightedSampleSet(std::ostream& out, const WeightedSampleSet& set) {
  for (const auto& e : set.entries()) {
    out << set.guesses().label(e.guess) << ',' << e.observable.Encode() << ','
        << e.weight << '\n';
  }
}

absl::StatusOr<WeightedSampleSet> ParseWeightedSampleSet(std::istream& in,
                                                         const Alphabet& guesses) {
  std::vector<WeightedSample> entries;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view view = internal::Sv(absl::StripAsciiWhitespace(line));
    if (view.empty()) continue;
    // Guess labels may contain commas (e.g. "{0,1}"); split from the right.
    const auto last = view.rfind(',');
    const auto mid = last == std::string_view::npos ? last : view.rfind(',', last - 1);
    if (mid == std::string_view::npos) {
      return absl::InvalidArgumentError(absl::StrCat(
          "weighted samples line ", lineno, ": expected 'w_label,y_encoding,weight'"));
    }
    const auto w = guesses.IndexOf(view.substr(0, mid));
    if (!w) {
      return absl::InvalidArgumentError(
          absl::StrCat("weighted samples line ", lineno, ": unknown guess"));
    }
    GLEAK_ASSIGN_OR_RETURN(Observable y,
                           Observable::Decode(view.substr(mid + 1, last - mid - 1)));
    std::uint64_t weight = 0;
    if (!absl::SimpleAtoi(internal::Av(view.substr(last + 1)), &weight)) {
      return absl::InvalidArgumentError(
          absl::StrCat("weighted samples line ", lineno, ": bad weight"));
    }
    entries.push_back({*w, y, weight});
  }
  return WeightedSampleSet::Create(guesses, std::move(entries));
}

}  // namespace gleak
