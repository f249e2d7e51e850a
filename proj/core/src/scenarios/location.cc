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


#include "gleak/scenarios/location.h"

#include <array>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "gleak/features.h"
#include "gleak/observable.h"
#include "gleak/sampling.h"
#include "gleak/status_macros.h"

namespace gleak {
namespace {

constexpr double kEarthRadiusMeters = 6371008.8;
constexpr double kDegree = std::numbers::pi / 180.0;

std::size_t BoundaryLowCell(double offset, double cell, std::size_t count) {
  const double k = std::ceil(offset / cell) - 1.0;
  if (k <= 0.0) return 0;
  return std::min(static_cast<std::size_t>(k), count - 1);
}

bool ParseDouble(const std::string& token, double& out) {
  char* end = nullptr;
  out = std::strtod(token.c_str(), &end);
  return end != token.c_str() && *end == '\0' && std::isfinite(out);
}

}  // namespace

absl::Status GridScenarioConfig::Validate() const {
  if (rows == 0 || cols == 0) {
    return absl::InvalidArgumentError("grid must have at least one cell");
  }
  if (!(cell_meters > 0.0) || !std::isfinite(cell_meters)) {
    return absl::InvalidArgumentError("cell side must be positive");
  }
  if (!(gamma > 0.0) || !(alpha >= 0.0)) {
    return absl::InvalidArgumentError("diamond gain needs gamma > 0, alpha >= 0");
  }
  if (!(nu > 0.0)) return absl::InvalidArgumentError("nu must be positive");
  if (std::abs(center_lat) > 90.0 || std::abs(center_lon) > 180.0) {
    return absl::InvalidArgumentError("center is not a valid coordinate");
  }
  return absl::OkStatus();
}

Alphabet GridAlphabet(const GridScenarioConfig& config) {
  std::vector<std::string> labels;
  labels.reserve(config.cells());
  for (std::size_t r = 0; r < config.rows; ++r) {
    for (std::size_t c = 0; c < config.cols; ++c) {
      labels.push_back(absl::StrCat("r", r, "c", c));
    }
  }
  return *Alphabet::Create(std::move(labels));
}

double CellDistance(const GridScenarioConfig& config, std::size_t a,
                    std::size_t b) {
  const double dr = static_cast<double>(a / config.cols) -
                    static_cast<double>(b / config.cols);
  const double dc = static_cast<double>(a % config.cols) -
                    static_cast<double>(b % config.cols);
  return std::hypot(dr, dc);
}

absl::StatusOr<GainFunction> DiamondGain(const GridScenarioConfig& config) {
  GLEAK_RETURN_IF_ERROR(config.Validate());
  const std::size_t n = config.cells();
  Matrix gains(n, n);
  for (std::size_t w = 0; w < n; ++w) {
    for (std::size_t x = 0; x < n; ++x) {
      // d / l with d in meters and l one cell side.
      gains(w, x) =
          std::round(config.gamma * std::exp(-config.alpha * CellDistance(config, w, x)));
    }
  }
  const Alphabet cells = GridAlphabet(config);
  return GainFunction::Create(cells, cells, std::move(gains));
}

absl::StatusOr<Channel> GridGeometricMechanism(const GridScenarioConfig& config,
                                               double nu) {
  GLEAK_RETURN_IF_ERROR(config.Validate());
  if (!(nu > 0.0)) return absl::InvalidArgumentError("nu must be positive");
  const std::size_t n = config.cells();
  Matrix rows(n, n);
  for (std::size_t x = 0; x < n; ++x) {
    auto row = rows.row(x);
    for (std::size_t y = 0; y < n; ++y) {
      row[y] = std::isinf(nu) ? (x == y ? 1.0 : 0.0)
                              : std::exp(-nu * CellDistance(config, x, y));
    }
    const double total = KahanTotal(row);
    for (double& v : row) v /= total;
  }
  const Alphabet cells = GridAlphabet(config);
  return Channel::Create(cells, cells, std::move(rows));
}

std::optional<std::size_t> LocateCell(const GridScenarioConfig& config,
                                      double latitude, double longitude) {
  const double east = kEarthRadiusMeters * (longitude - config.center_lon) *
                      kDegree * std::cos(config.center_lat * kDegree);
  const double north = kEarthRadiusMeters * (latitude - config.center_lat) * kDegree;
  const double width = config.cell_meters * static_cast<double>(config.cols);
  const double height = config.cell_meters * static_cast<double>(config.rows);
  const double u = east + width / 2.0;
  const double v = north + height / 2.0;
  if (!(u >= 0.0 && u <= width && v >= 0.0 && v <= height)) return std::nullopt;
  const std::size_t col = BoundaryLowCell(u, config.cell_meters, config.cols);
  const std::size_t row = BoundaryLowCell(v, config.cell_meters, config.rows);
  return row * config.cols + col;
}

absl::StatusOr<CheckinIngest> IngestCheckins(std::istream& in,
                                             const GridScenarioConfig& config,
                                             CheckinColumns columns) {
  GLEAK_RETURN_IF_ERROR(config.Validate());
  std::vector<double> counts(config.cells(), 0.0);
  std::uint64_t records = 0;
  std::uint64_t in_region = 0;
  const std::size_t needed = std::max(columns.latitude, columns.longitude) + 1;
  std::string line;
  std::vector<std::string> fields;
  while (std::getline(in, line)) {
    std::istringstream tokens(line);
    fields.clear();
    for (std::string t; tokens >> t;) fields.push_back(std::move(t));
    if (fields.empty()) continue;
    ++records;
    double lat = 0.0;
    double lon = 0.0;
    if (fields.size() < needed || !ParseDouble(fields[columns.latitude], lat) ||
        !ParseDouble(fields[columns.longitude], lon)) {
      return absl::InvalidArgumentError(
          absl::StrCat("check-in record ", records, " is malformed"));
    }
    if (auto cell = LocateCell(config, lat, lon)) {
      counts[*cell] += 1.0;
      ++in_region;
    }
  }
  if (in.bad()) return absl::DataLossError("error reading check-ins");
  if (in_region == 0) {
    return absl::InvalidArgumentError(absl::StrCat(
        "none of ", records, " check-ins fall inside the region"));
  }
  for (double& c : counts) c /= static_cast<double>(in_region);
  GLEAK_ASSIGN_OR_RETURN(Prior prior,
                         Prior::Create(GridAlphabet(config), std::move(counts)));
  return CheckinIngest{std::move(prior), records, in_region};
}

absl::StatusOr<CheckinIngest> IngestCheckinFile(const std::string& path,
                                                const GridScenarioConfig& config,
                                                CheckinColumns columns) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  return IngestCheckins(in, config, columns);
}

Prior SyntheticLocationPrior(const GridScenarioConfig& config) {
  struct Hotspot {
    double row, col, sigma, weight;  // row/col as grid fractions
  };
  constexpr std::array<Hotspot, 3> kHotspots = {{
      {0.30, 0.35, 0.10, 0.5},
      {0.65, 0.60, 0.15, 0.3},
      {0.80, 0.25, 0.07, 0.2},
  }};
  const double scale = static_cast<double>(std::max(config.rows, config.cols));
  std::vector<double> p(config.cells(), 0.0);
  for (std::size_t r = 0; r < config.rows; ++r) {
    for (std::size_t c = 0; c < config.cols; ++c) {
      double v = 0.05 / static_cast<double>(config.cells());
      for (const Hotspot& h : kHotspots) {
        const double dr = (r + 0.5) - h.row * config.rows;
        const double dc = (c + 0.5) - h.col * config.cols;
        const double s = h.sigma * scale;
        v += h.weight * std::exp(-(dr * dr + dc * dc) / (2.0 * s * s));
      }
      p[r * config.cols + c] = v;
    }
  }
  const double total = KahanTotal(p);
  for (double& v : p) v /= total;
  return *Prior::Create(GridAlphabet(config), std::move(p));
}

absl::StatusOr<ScenarioInstance> LocationScenario(const GridScenarioConfig& config,
                                                  std::optional<Prior> prior) {
  GLEAK_RETURN_IF_ERROR(config.Validate());
  GLEAK_ASSIGN_OR_RETURN(Channel channel, GridGeometricMechanism(config, config.nu));
  GLEAK_ASSIGN_OR_RETURN(GainFunction gain, DiamondGain(config));
  Prior pi = prior.has_value() ? std::move(*prior) : SyntheticLocationPrior(config);
  GLEAK_ASSIGN_OR_RETURN(double exact, PosteriorVulnerability(pi, channel, gain));

  auto cells = std::make_shared<MatrixChannelSampler>(channel);
  const std::size_t cols = config.cols;
  auto sampler = std::make_shared<GenerativeChannel>(
      channel.input(), 2, [cells, cols](std::size_t x, Rng& rng) {
        const std::size_t cell = cells->Sample(x, rng).index();
        const std::array<std::int64_t, 2> rc = {
            static_cast<std::int64_t>(cell / cols),
            static_cast<std::int64_t>(cell % cols)};
        return *Observable::Tuple(rc);
      });
  GLEAK_ASSIGN_OR_RETURN(
      FeatureCodec codec,
      FeatureCodec::Uniform(2, std::max(1.0, config.rows / 4.0)));
  const std::size_t ny = channel.output().size();
  return ScenarioInstance{
      .id = "location",
      .prior = std::move(pi),
      .channel = std::move(sampler),
      .matrix = std::move(channel),
      .gain = std::move(gain),
      .exact_vulnerability = exact,
      .metric = {MetricKind::kEuclidean, std::move(codec)},
      .observable_count = ny,
  };
}

}  // namespace gleak
