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

#include "gleak/qif.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "gleak/status_macros.h"
#include "string_compat.h"

namespace gleak {
namespace {

absl::Status CheckFinite(const Matrix& m, std::string_view what) {
  for (double v : m.data()) {
    if (!std::isfinite(v)) {
      return absl::InvalidArgumentError(absl::StrCat(internal::Av(what), " has a non-finite entry"));
    }
  }
  return absl::OkStatus();
}

absl::Status CheckSameAlphabet(const Alphabet& a, const Alphabet& b,
                               std::string_view what) {
  if (a.size() != b.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        internal::Av(what), ": alphabet sizes differ (", a.size(), " vs ", b.size(), ")"));
  }
  if (!(a == b)) {
    return absl::InvalidArgumentError(
        absl::StrCat(internal::Av(what), ": alphabet labels differ"));
  }
  return absl::OkStatus();
}

absl::Status CheckTriple(const Prior& prior, const Channel& channel,
                         const GainFunction& gain) {
  GLEAK_RETURN_IF_ERROR(
      CheckSameAlphabet(prior.alphabet(), channel.input(), "prior/channel"));
  return CheckSameAlphabet(prior.alphabet(), gain.secrets(), "prior/gain");
}

// Column scores s(w) = sum_x pi_x C_xy g(w, x) for a single observable y.
void ColumnScores(const Prior& prior, const Channel& channel,
                  const GainFunction& gain, std::size_t y,
                  std::vector<double>& joint_column,
                  std::vector<double>& scores) {
  const std::size_t nx = prior.size();
  for (std::size_t x = 0; x < nx; ++x) joint_column[x] = prior[x] * channel(x, y);
  for (std::size_t w = 0; w < gain.num_guesses(); ++w) {
    const auto g = gain.matrix().row(w);
    double s = 0.0;
    for (std::size_t x = 0; x < nx; ++x) s += joint_column[x] * g[x];
    scores[w] = s;
  }
}

}  // namespace

absl::StatusOr<Prior> Prior::Create(Alphabet alphabet, std::vector<double> probs) {
  if (probs.size() != alphabet.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "prior has ", probs.size(), " entries for an alphabet of size ",
        alphabet.size()));
  }
  for (double p : probs) {
    if (!std::isfinite(p) || p < 0.0) {
      return absl::InvalidArgumentError("prior entries must be finite and >= 0");
    }
  }
  const double total = KahanTotal(probs);
  if (std::abs(total - 1.0) > kStochasticTolerance) {
    return absl::InvalidArgumentError(
        absl::StrCat("prior sums to ", total, ", expected 1"));
  }
  return Prior(std::move(alphabet), std::move(probs));
}

Prior Prior::Uniform(Alphabet alphabet) {
  const std::size_t n = alphabet.size();
  return Prior(std::move(alphabet), std::vector<double>(n, 1.0 / n));
}

absl::StatusOr<Channel> Channel::Create(Alphabet input, Alphabet output,
                                        Matrix rows) {
  if (rows.rows() != input.size() || rows.cols() != output.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "channel matrix is ", rows.rows(), "x", rows.cols(), ", expected ",
        input.size(), "x", output.size()));
  }
  GLEAK_RETURN_IF_ERROR(CheckFinite(rows, "channel"));
  for (std::size_t x = 0; x < rows.rows(); ++x) {
    for (double v : rows.row(x)) {
      if (v < 0.0) {
        return absl::InvalidArgumentError("channel entries must be >= 0");
      }
    }
    const double total = KahanTotal(rows.row(x));
    if (std::abs(total - 1.0) > kStochasticTolerance) {
      return absl::InvalidArgumentError(
          absl::StrCat("channel row ", x, " sums to ", total, ", expected 1"));
    }
  }
  return Channel(std::move(input), std::move(output), std::move(rows));
}

Channel Channel::Identity(const Alphabet& alphabet) {
  return Channel(alphabet, alphabet, Matrix::Identity(alphabet.size()));
}

GainFunction::GainFunction(Alphabet guesses, Alphabet secrets, Matrix gains,
                           double offset)
    : guesses_(std::move(guesses)), secrets_(std::move(secrets)),
      gains_(std::move(gains)), offset_(offset) {
  const auto& d = gains_.data();
  min_ = d.empty() ? 0.0 : *std::min_element(d.begin(), d.end());
  max_ = d.empty() ? 0.0 : *std::max_element(d.begin(), d.end());
}

absl::StatusOr<GainFunction> GainFunction::Create(Alphabet guesses,
                                                  Alphabet secrets,
                                                  Matrix gains) {
  if (gains.rows() != guesses.size() || gains.cols() != secrets.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "gain matrix is ", gains.rows(), "x", gains.cols(), ", expected ",
        guesses.size(), "x", secrets.size()));
  }
  GLEAK_RETURN_IF_ERROR(CheckFinite(gains, "gain"));
  const auto& d = gains.data();
  const double lo = *std::min_element(d.begin(), d.end());
  double offset = 0.0;
  if (lo < 0.0) {
    offset = -lo;
    for (std::size_t w = 0; w < gains.rows(); ++w) {
      for (double& v : gains.row(w)) v += offset;
    }
  }
  return GainFunction(std::move(guesses), std::move(secrets), std::move(gains),
                      offset);
}

GainFunction GainFunction::Identity(const Alphabet& secrets) {
  return GainFunction(secrets, secrets, Matrix::Identity(secrets.size()), 0.0);
}

bool GainFunction::IsIntegerValued() const {
  return std::all_of(gains_.data().begin(), gains_.data().end(),
                     [](double v) { return v == std::floor(v); });
}

absl::StatusOr<JointDistribution> JointDistribution::Create(Alphabet secrets,
                                                            Alphabet observables,
                                                            Matrix probs) {
  if (probs.rows() != secrets.size() || probs.cols() != observables.size()) {
    return absl::InvalidArgumentError("joint matrix shape mismatch");
  }
  GLEAK_RETURN_IF_ERROR(CheckFinite(probs, "joint"));
  for (double v : probs.data()) {
    if (v < 0.0) return absl::InvalidArgumentError("joint entries must be >= 0");
  }
  const double total = KahanTotal(probs.data());
  if (std::abs(total - 1.0) > kStochasticTolerance) {
    return absl::InvalidArgumentError(
        absl::StrCat("joint sums to ", total, ", expected 1"));
  }
  return JointDistribution(std::move(secrets), std::move(observables),
                           std::move(probs));
}

absl::StatusOr<double> PriorVulnerability(const Prior& prior,
                                          const GainFunction& gain) {
  GLEAK_RETURN_IF_ERROR(
      CheckSameAlphabet(prior.alphabet(), gain.secrets(), "prior/gain"));
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t w = 0; w < gain.num_guesses(); ++w) {
    KahanSum s;
    for (std::size_t x = 0; x < prior.size(); ++x) s.Add(prior[x] * gain(w, x));
    best = std::max(best, s.value());
  }
  return best;
}

absl::StatusOr<double> PosteriorVulnerability(const Prior& prior,
                                              const Channel& channel,
                                              const GainFunction& gain) {
  GLEAK_RETURN_IF_ERROR(CheckTriple(prior, channel, gain));
  std::vector<double> column(prior.size());
  std::vector<double> scores(gain.num_guesses());
  KahanSum total;
  for (std::size_t y = 0; y < channel.output().size(); ++y) {
    ColumnScores(prior, channel, gain, y, column, scores);
    total.Add(*std::max_element(scores.begin(), scores.end()));
  }
  return total.value();
}

absl::StatusOr<double> Leakage(const Prior& prior, const Channel& channel,
                               const GainFunction& gain, LeakageMode mode) {
  GLEAK_ASSIGN_OR_RETURN(double posterior,
                         PosteriorVulnerability(prior, channel, gain));
  GLEAK_ASSIGN_OR_RETURN(double before, PriorVulnerability(prior, gain));
  posterior -= gain.offset();
  before -= gain.offset();
  if (mode == LeakageMode::kAdditive) return posterior - before;
  if (before <= 0.0) {
    return absl::FailedPreconditionError(
        "multiplicative leakage undefined: prior vulnerability is not positive");
  }
  return posterior / before;
}

absl::StatusOr<double> StrategyGain(const Strategy& strategy,
                                    const JointDistribution& joint,
                                    const GainFunction& gain) {
  GLEAK_RETURN_IF_ERROR(
      CheckSameAlphabet(joint.secrets(), gain.secrets(), "joint/gain"));
  if (strategy.size() != joint.observables().size()) {
    return absl::InvalidArgumentError("strategy is not total on the observables");
  }
  KahanSum total;
  for (std::size_t x = 0; x < joint.secrets().size(); ++x) {
    for (std::size_t y = 0; y < strategy.size(); ++y) {
      const std::size_t w = strategy(y);
      if (w >= gain.num_guesses()) {
        return absl::InvalidArgumentError("strategy maps to an unknown guess");
      }
      total.Add(gain(w, x) * joint(x, y));
    }
  }
  return total.value();
}

absl::StatusOr<Strategy> OptimalStrategy(const Prior& prior,
                                         const Channel& channel,
                                         const GainFunction& gain) {
  GLEAK_RETURN_IF_ERROR(CheckTriple(prior, channel, gain));
  Strategy f;
  f.guess_for_observable.resize(channel.output().size());
  std::vector<double> column(prior.size());
  std::vector<double> scores(gain.num_guesses());
  for (std::size_t y = 0; y < channel.output().size(); ++y) {
    ColumnScores(prior, channel, gain, y, column, scores);
    f.guess_for_observable[y] = ArgmaxLowest(scores);
  }
  return f;
}

absl::StatusOr<double> EnumerateStrategiesVulnerability(
    const Prior& prior, const Channel& channel, const GainFunction& gain,
    std::uint64_t cap) {
  GLEAK_RETURN_IF_ERROR(CheckTriple(prior, channel, gain));
  const std::size_t ny = channel.output().size();
  const std::uint64_t nw = gain.num_guesses();
  std::uint64_t count = 1;
  for (std::size_t y = 0; y < ny; ++y) {
    if (count > cap / nw) {
      return absl::ResourceExhaustedError(absl::StrCat(
          "|W|^|Y| = ", nw, "^", ny, " exceeds the enumeration cap ", cap));
    }
    count *= nw;
  }
  GLEAK_ASSIGN_OR_RETURN(JointDistribution joint, JointFrom(prior, channel));

  Strategy f;
  f.guess_for_observable.assign(ny, 0);
  double best = -std::numeric_limits<double>::infinity();
  for (std::uint64_t k = 0; k < count; ++k) {
    GLEAK_ASSIGN_OR_RETURN(double v, StrategyGain(f, joint, gain));
    best = std::max(best, v);
    // Odometer increment over Y -> W.
    for (std::size_t y = 0; y < ny; ++y) {
      if (++f.guess_for_observable[y] < nw) break;
      f.guess_for_observable[y] = 0;
    }
  }
  return best;
}

absl::StatusOr<JointDistribution> JointFrom(const Prior& prior,
                                            const Channel& channel) {
  GLEAK_RETURN_IF_ERROR(
      CheckSameAlphabet(prior.alphabet(), channel.input(), "prior/channel"));
  Matrix probs(prior.size(), channel.output().size());
  for (std::size_t x = 0; x < prior.size(); ++x) {
    for (std::size_t y = 0; y < probs.cols(); ++y) {
      probs(x, y) = prior[x] * channel(x, y);
    }
  }
  return JointDistribution::Create(prior.alphabet(), channel.output(),
                                   std::move(probs));
}

}  // namespace gleak
