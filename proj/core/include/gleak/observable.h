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

#ifndef GLEAK_OBSERVABLE_H_
#define GLEAK_OBSERVABLE_H_

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "absl/status/statusor.h"

namespace gleak {

// A channel output: a short tuple of integers. Matrix channels produce
// one-element tuples holding the observable index; generative channels may
// produce longer tuples (e.g. a noisy 5-bin histogram).
//
// The canonical text encoding is the decimal components joined by ':'.
class Observable {
 public:
  static constexpr std::size_t kMaxDim = 6;

  Observable() = default;
  explicit Observable(std::int64_t value) : dim_(1) { values_[0] = value; }

  static absl::StatusOr<Observable> Tuple(std::span<const std::int64_t> values);
  static absl::StatusOr<Observable> Decode(std::string_view encoding);

  std::size_t dim() const { return dim_; }
  std::int64_t operator[](std::size_t i) const { return values_[i]; }
  std::span<const std::int64_t> values() const { return {values_.data(), dim_}; }

  // Convenience for one-dimensional observables.
  std::size_t index() const { return static_cast<std::size_t>(values_[0]); }

  std::string Encode() const;

  friend bool operator==(const Observable& a, const Observable& b) {
    return a.dim_ == b.dim_ && a.values_ == b.values_;
  }
  friend std::strong_ordering operator<=>(const Observable& a,
                                          const Observable& b) {
    if (auto c = a.dim_ <=> b.dim_; c != 0) return c;
    return a.values_ <=> b.values_;
  }

 private:
  std::array<std::int64_t, kMaxDim> values_{};
  std::size_t dim_ = 0;
};

struct ObservableHash {
  std::size_t operator()(const Observable& o) const noexcept;
};

}  // namespace gleak

#endif  // GLEAK_OBSERVABLE_H_
