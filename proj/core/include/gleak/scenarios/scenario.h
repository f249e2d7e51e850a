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


#ifndef GLEAK_SCENARIOS_SCENARIO_H_
#define GLEAK_SCENARIOS_SCENARIO_H_

#include <cstddef>
#include <memory>
#include <optional>
#include <string>

#include "gleak/features.h"
#include "gleak/qif.h"
#include "gleak/sampling.h"

namespace gleak {

// Everything the estimation pipelines need about one experiment: the prior,
// black-box sampling access to the channel, the gain, the reference value of
// V_g and the learner-facing feature encoding.
struct ScenarioInstance {
  std::string id;
  Prior prior;
  std::shared_ptr<const SamplingChannel> channel;
  // Tabulated channel, when one exists. Output indices follow the order in
  // which the scenario documents its observables.
  std::optional<Channel> matrix;
  GainFunction gain;
  double exact_vulnerability = 0.0;
  DistanceMetric metric;
  // |Y| used for ln|H| in bound reports; 0 when the support is unbounded.
  std::size_t observable_count = 0;
};

}  // namespace gleak

#endif  // GLEAK_SCENARIOS_SCENARIO_H_
