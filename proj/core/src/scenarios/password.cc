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


#include "gleak/scenarios/password.h"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "gleak/features.h"
#include "gleak/observable.h"
#include "gleak/rng.h"
#include "gleak/sampling.h"
#include "gleak/status_macros.h"

namespace gleak {
namespace {

constexpr std::size_t kMaxBits = 1000;

Alphabet ClassAlphabet() { return *Alphabet::Create({"agree", "disagree"}); }

// P(N <= k) for two-sided geometric noise.
double NoiseCdf(double nu, double k) {
  if (std::isinf(nu)) return k >= 0.0 ? 1.0 : 0.0;
  const double p0 = 1.0 / (1.0 + std::exp(-nu));
  return k <= 0.0 ? p0 * std::exp(nu * k) : 1.0 - p0 * std::exp(-nu * (k + 1.0));
}

double NoisePmf(double nu, double k) {
  if (std::isinf(nu)) return k == 0.0 ? 1.0 : 0.0;
  return std::tanh(nu / 2.0) * std::exp(-nu * std::abs(k));
}

// Bit i (1-based) of the submitted guess beyond the target. Any fixed
// pattern works since the stored suffix is uniform.
bool SubmittedBit(std::size_t i) { return (i % 2) == 1; }

class BitStream {
 public:
  explicit BitStream(Rng& rng) : rng_(rng) {}
  bool Next() {
    if (left_ == 0) {
      word_ = rng_.NextU64();
      left_ = 64;
    }
    const bool bit = word_ & 1u;
    word_ >>= 1;
    --left_;
    return bit;
  }

 private:
  Rng& rng_;
  std::uint64_t word_ = 0;
  int left_ = 0;
};

}  // namespace

absl::Status PasswordScenarioConfig::Validate() const {
  if (target_bit != prefix_bits + 1) {
    return absl::InvalidArgumentError(
        "the target bit must be the first bit after the known prefix");
  }
  if (total_bits < 2 || total_bits > kMaxBits || target_bit > total_bits) {
    return absl::InvalidArgumentError(absl::StrCat(
        "total bits must be in [max(2, target bit), ", kMaxBits, "]"));
  }
  if (!(nu > 0.0)) return absl::InvalidArgumentError("nu must be positive");
  return absl::OkStatus();
}

absl::StatusOr<Channel> PasswordClassChannel(const PasswordScenarioConfig& config) {
  GLEAK_RETURN_IF_ERROR(config.Validate());
  const std::size_t total = config.total_bits;
  const std::size_t target = config.target_bit;

  // Fail-position law per class, indexed by position 1..total.
  Matrix fail(2, total + 1);
  fail(kPasswordDisagree, target) = 1.0;
  for (std::size_t j = target + 1; j <= total; ++j) {
    fail(kPasswordAgree, j) = std::ldexp(1.0, -static_cast<int>(j - target));
  }
  // A full match also stops at the last position.
  fail(kPasswordAgree, total) +=
      std::ldexp(1.0, -static_cast<int>(total - target));

  Matrix rows(2, total);
  for (std::size_t c = 0; c < 2; ++c) {
    for (std::size_t t = target; t <= total; ++t) {
      const double pt = fail(c, t);
      if (pt == 0.0) continue;
      const double td = static_cast<double>(t);
      for (std::size_t o = 1; o <= total; ++o) {
        const double od = static_cast<double>(o);
        double p;
        if (o == 1) {
          p = NoiseCdf(config.nu, 1.0 - td);
        } else if (o == total) {
          p = 1.0 - NoiseCdf(config.nu, od - 1.0 - td);
        } else {
          p = NoisePmf(config.nu, od - td);
        }
        rows(c, o - 1) += pt * p;
      }
    }
  }
  std::vector<std::string> labels;
  for (std::size_t o = 1; o <= total; ++o) labels.push_back(std::to_string(o));
  GLEAK_ASSIGN_OR_RETURN(Alphabet outputs, Alphabet::Create(std::move(labels)));
  return Channel::Create(ClassAlphabet(), std::move(outputs), std::move(rows));
}

absl::StatusOr<ChannelPreprocDerivation> PasswordPreprocess(
    const PasswordScenarioConfig& config) {
  GLEAK_RETURN_IF_ERROR(config.Validate());
  const Alphabet classes = ClassAlphabet();
  return ChannelPreprocess(Prior::Uniform(classes), GainFunction::Identity(classes));
}

absl::StatusOr<double> PasswordExactVulnerability(
    const PasswordScenarioConfig& config) {
  GLEAK_ASSIGN_OR_RETURN(Channel c, PasswordClassChannel(config));
  GLEAK_ASSIGN_OR_RETURN(ChannelPreprocDerivation d, PasswordPreprocess(config));
  GLEAK_ASSIGN_OR_RETURN(Channel rc, Compose(d.r, c));
  GLEAK_ASSIGN_OR_RETURN(
      double v, PosteriorVulnerability(d.tau, rc, GainFunction::Identity(d.tau.alphabet())));
  return d.beta * v;
}

absl::StatusOr<ScenarioInstance> PasswordScenario(
    const PasswordScenarioConfig& config) {
  GLEAK_ASSIGN_OR_RETURN(double exact, PasswordExactVulnerability(config));
  GLEAK_ASSIGN_OR_RETURN(Channel matrix, PasswordClassChannel(config));
  const Alphabet classes = ClassAlphabet();

  const std::size_t total = config.total_bits;
  const std::size_t target = config.target_bit;
  const double nu = config.nu;
  auto sampler = std::make_shared<GenerativeChannel>(
      classes, 1, [total, target, nu](std::size_t cls, Rng& rng) {
        // The prefix matches by construction; bit `target` fails iff the
        // class says so; later stored bits are drawn as the check reaches
        // them.
        std::size_t fail = total;
        if (cls == kPasswordDisagree) {
          fail = target;
        } else {
          BitStream stored(rng);
          for (std::size_t i = target + 1; i <= total; ++i) {
            if (stored.Next() != SubmittedBit(i)) {
              fail = i;
              break;
            }
          }
        }
        const std::int64_t delayed =
            static_cast<std::int64_t>(fail) + rng.TwoSidedGeometric(nu);
        return Observable(
            std::clamp<std::int64_t>(delayed, 1, static_cast<std::int64_t>(total)));
      });
  GLEAK_ASSIGN_OR_RETURN(
      FeatureCodec codec,
      FeatureCodec::Uniform(1, std::max(1.0, static_cast<double>(total) / 8.0)));
  return ScenarioInstance{
      .id = "password",
      .prior = Prior::Uniform(classes),
      .channel = std::move(sampler),
      .matrix = std::move(matrix),
      .gain = GainFunction::Identity(classes),
      .exact_vulnerability = exact,
      .metric = {MetricKind::kAbsoluteNumeric, std::move(codec)},
      .observable_count = total,
  };
}

}  // namespace gleak
