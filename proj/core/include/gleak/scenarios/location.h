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


#ifndef GLEAK_SCENARIOS_LOCATION_H_
#define GLEAK_SCENARIOS_LOCATION_H_

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <string>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "gleak/qif.h"
#include "gleak/scenarios/scenario.h"

namespace gleak {

// Square grid of cells around a geographic center. Cell (r, c) has index
// r * cols + c; row 0 is the southern edge and column 0 the western one.
struct GridScenarioConfig {
  std::size_t rows = 20;
  std::size_t cols = 20;
  double cell_meters = 250.0;
  double center_lat = 37.755;
  double center_lon = -122.440;
  // Diamond gain round(gamma * exp(-alpha * d / l)), l = cell_meters.
  double gamma = 4.0;
  double alpha = 0.95;
  // Decay per cell of the planar geometric mechanism.
  double nu = 1.0;

  std::size_t cells() const { return rows * cols; }
  absl::Status Validate() const;
};

// Cell labels "r<row>c<col>".
Alphabet GridAlphabet(const GridScenarioConfig& config);

// Euclidean distance between cell centers, in cells.
double CellDistance(const GridScenarioConfig& config, std::size_t a,
                    std::size_t b);

absl::StatusOr<GainFunction> DiamondGain(const GridScenarioConfig& config);

// C_xy ∝ exp(-nu * CellDistance(x, y)), rows renormalized.
absl::StatusOr<Channel> GridGeometricMechanism(const GridScenarioConfig& config,
                                               double nu);

// Column positions (0-based) of latitude and longitude in a check-in line.
struct CheckinColumns {
  std::size_t latitude = 2;
  std::size_t longitude = 3;
};

struct CheckinIngest {
  Prior prior;
  std::uint64_t records = 0;
  std::uint64_t in_region = 0;
};

// Counts check-ins per cell over the closed square region. Positions are
// projected equirectangularly about the center; a point on a cell boundary
// goes to the lower-index cell.
absl::StatusOr<CheckinIngest> IngestCheckins(std::istream& in,
                                             const GridScenarioConfig& config,
                                             CheckinColumns columns = {});
absl::StatusOr<CheckinIngest> IngestCheckinFile(const std::string& path,
                                                const GridScenarioConfig& config,
                                                CheckinColumns columns = {});

// Cell of a projected position, or nullopt outside the region.
std::optional<std::size_t> LocateCell(const GridScenarioConfig& config,
                                      double latitude, double longitude);

// Deterministic stand-in prior: a few Gaussian hotspots over a uniform floor.
Prior SyntheticLocationPrior(const GridScenarioConfig& config);

// Observables are (row, col) pairs ranked by Euclidean distance. Without a
// prior the synthetic one is used.
absl::StatusOr<ScenarioInstance> LocationScenario(
    const GridScenarioConfig& config, std::optional<Prior> prior = std::nullopt);

}  // namespace gleak

#endif  // GLEAK_SCENARIOS_LOCATION_H_
