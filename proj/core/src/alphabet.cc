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

#include "gleak/alphabet.h"

#include <string>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace gleak {

absl::StatusOr<Alphabet> Alphabet::Create(std::vector<std::string> labels) {
  if (labels.empty()) {
    return absl::InvalidArgumentError("alphabet must be non-empty");
  }
  Alphabet a;
  a.index_.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!a.index_.emplace(labels[i], i).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate alphabet label '", labels[i], "'"));
    }
  }
  a.labels_ = std::move(labels);
  return a;
}

Alphabet Alphabet::Indexed(std::size_t n) {
  Alphabet a;
  a.labels_.reserve(n);
  a.index_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    a.labels_.push_back(std::to_string(i));
    a.index_.emplace(a.labels_.back(), i);
  }
  return a;
}

std::optional<std::size_t> Alphabet::IndexOf(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

}  // namespace gleak
