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

#include "gleak/observable.h"

#include <charconv>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "string_compat.h"

namespace gleak {

absl::StatusOr<Observable> Observable::Tuple(
    std::span<const std::int64_t> values) {
  if (values.empty() || values.size() > kMaxDim) {
    return absl::InvalidArgumentError(absl::StrCat(
        "observable tuples must have 1..", kMaxDim, " components, got ",
        values.size()));
  }
  Observable o;
  o.dim_ = values.size();
  for (std::size_t i = 0; i < values.size(); ++i) o.values_[i] = values[i];
  return o;
}

absl::StatusOr<Observable> Observable::Decode(std::string_view encoding) {
  std::vector<std::int64_t> values;
  for (absl::string_view part : absl::StrSplit(internal::Av(encoding), ':')) {
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc() || ptr != part.data() + part.size() || part.empty()) {
      return absl::InvalidArgumentError(
          absl::StrCat("malformed observable encoding '", internal::Av(encoding), "'"));
    }
    values.push_back(v);
  }
  return Tuple(values);
}

std::string Observable::Encode() const {
  return absl::StrJoin(values(), ":");
}

std::size_t ObservableHash::operator()(const Observable& o) const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ o.dim();
  for (std::int64_t v : o.values()) {
    h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

}  // namespace gleak
