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

#ifndef GLEAK_SAMPLING_H_
#define GLEAK_SAMPLING_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "gleak/alphabet.h"
#include "gleak/observable.h"
#include "gleak/qif.h"
#include "gleak/rng.h"

namespace gleak {

struct SeedProvenance {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;
};

struct LabeledSample {
  std::size_t secret = 0;
  Observable observable;

  friend bool operator==(const LabeledSample&, const LabeledSample&) = default;
};

// A multiset of (secret, observable) pairs, i.e. a training or validation
// set drawn from pi |> C.
class SampleSet {
 public:
  SampleSet() = default;
  static absl::StatusOr<SampleSet> Create(Alphabet secrets,
                                          std::vector<LabeledSample> pairs,
                                          SeedProvenance provenance = {});

  const Alphabet& secrets() const { return secrets_; }
  const std::vector<LabeledSample>& pairs() const { return pairs_; }
  const SeedProvenance& provenance() const { return provenance_; }
  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }

  friend bool operator==(const SampleSet& a, const SampleSet& b) {
    return a.secrets_ == b.secrets_ && a.pairs_ == b.pairs_;
  }

 private:
  SampleSet(Alphabet secrets, std::vector<LabeledSample> pairs,
            SeedProvenance provenance)
      : secrets_(std::move(secrets)), pairs_(std::move(pairs)),
        provenance_(provenance) {}

  Alphabet secrets_;
  std::vector<LabeledSample> pairs_;
  SeedProvenance provenance_;
};

// Draws indices from a fixed discrete distribution by inverse-CDF lookup.
class CategoricalSampler {
 public:
  explicit CategoricalSampler(std::span<const double> weights);

  std::size_t Sample(Rng& rng) const;
  std::size_t size() const { return cumulative_.size(); }

 private:
  std::vector<double> cumulative_;
};

// Black-box access to a channel: given a secret, run the system once.
class SamplingChannel {
 public:
  virtual ~SamplingChannel() = default;

  virtual const Alphabet& input() const = 0;
  virtual Observable Sample(std::size_t secret, Rng& rng) const = 0;
};

// Samples the rows of a matrix channel. Observables are the output indices.
class MatrixChannelSampler final : public SamplingChannel {
 public:
  explicit MatrixChannelSampler(Channel channel);

  const Alphabet& input() const override { return channel_.input(); }
  Observable Sample(std::size_t secret, Rng& rng) const override;
  const Channel& channel() const { return channel_; }

 private:
  Channel channel_;
  std::vector<CategoricalSampler> rows_;
};

// A channel given only as a sampling procedure, for observation spaces that
// are unbounded or too large to tabulate. The sampler must be a pure function
// of (secret, rng state).
class GenerativeChannel final : public SamplingChannel {
 public:
  using Sampler = std::function<Observable(std::size_t secret, Rng& rng)>;

  GenerativeChannel(Alphabet input, std::size_t observable_dim, Sampler sampler)
      : input_(std::move(input)), observable_dim_(observable_dim),
        sampler_(std::move(sampler)) {}

  const Alphabet& input() const override { return input_; }
  Observable Sample(std::size_t secret, Rng& rng) const override {
    return sampler_(secret, rng);
  }
  std::size_t observable_dim() const { return observable_dim_; }

 private:
  Alphabet input_;
  std::size_t observable_dim_;
  Sampler sampler_;
};

// `count` i.i.d. pairs from a tabulated joint distribution.
absl::StatusOr<SampleSet> SampleJoint(const JointDistribution& joint,
                                      std::size_t count,
                                      std::uint64_t master_seed,
                                      std::uint64_t stream_id);

// `count` i.i.d. pairs: x ~ prior, y = channel.Sample(x).
absl::StatusOr<SampleSet> SampleJoint(const Prior& prior,
                                      const SamplingChannel& channel,
                                      std::size_t count,
                                      std::uint64_t master_seed,
                                      std::uint64_t stream_id);

}  // namespace gleak

#endif  // GLEAK_SAMPLING_H_
