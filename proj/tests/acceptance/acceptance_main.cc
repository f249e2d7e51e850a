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


// Runs every acceptance criterion and exits non-zero if any fails.

#include <cstdlib>
#include <iostream>

#include "acceptance.h"

int main(int argc, char** argv) {
  gleak::acceptance::Options options;
  if (argc > 1) options.seed = std::strtoull(argv[1], nullptr, 10);
  options.log = &std::cerr;
  bool ok = true;
  for (const auto& o : gleak::acceptance::Run(options, std::cout)) ok = ok && o.pass;
  std::cout << (ok ? "ALL CRITERIA PASSED" : "SOME CRITERIA FAILED") << std::endl;
  return ok ? EXIT_SUCCESS : EXIT_FAILURE;
}
