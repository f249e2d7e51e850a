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

#include "gleak/rng.h"

#include <cmath>
#include <limits>

namespace gleak {

Rng::Rng(std::uint64_t master_seed, std::uint64_t stream_id)
    : master_seed_(master_seed),
      stream_id_(stream_id),
      engine_(Mix64(master_seed ^ Mix64(stream_id ^ 0x5851f42d4c957f2dULL))) {}

std::uint64_t Rng::UniformIndex(std::uint64_t n) {
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t limit = max - (max % n + 1) % n;
  std::uint64_t v;
  do {
    v = engine_();
  } while (v > limit);
  return v % n;
}

std::int64_t Rng::Geometric(double q) {
  if (q <= 0.0) return 0;
  const double u = UniformOpen01();
  return static_cast<std::int64_t>(std::floor(std::log(u) / std::log(q)));
}

std::int64_t Rng::TwoSidedGeometric(double nu) {
  if (std::isinf(nu)) return 0;
  const double q = std::exp(-nu);
  return Geometric(q) - Geometric(q);
}

}  // namespace gleak
