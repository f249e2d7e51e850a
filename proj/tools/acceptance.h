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


#ifndef GLEAK_TOOLS_ACCEPTANCE_H_
#define GLEAK_TOOLS_ACCEPTANCE_H_

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <set>
#include <string>
#include <vector>

namespace gleak::acceptance {

inline constexpr int kNumCriteria = 9;

struct Options {
  // Empty runs all criteria.
  std::set<int> criteria;
  // Independent training replicas for the estimation-quality criterion.
  std::size_t replicas = 10;
  // 0 picks the hardware concurrency.
  std::size_t workers = 0;
  std::uint64_t seed = 2024;
  // Optional progress sink.
  std::ostream* log = nullptr;
};

struct Outcome {
  int criterion = 0;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

// Runs the selected criteria, printing one "PASS"/"FAIL" line each to `out`.
std::vector<Outcome> Run(const Options& options, std::ostream& out);

}  // namespace gleak::acceptance

#endif  // GLEAK_TOOLS_ACCEPTANCE_H_
