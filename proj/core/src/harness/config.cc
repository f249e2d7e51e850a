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


#include "gleak/harness/config.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "gleak/status_macros.h"
#include "json.hpp"
#include "../string_compat.h"

namespace gleak {
namespace {

using Json = nlohmann::ordered_json;
using internal::Av;

// Field readers. Each leaves `out` untouched when the key is absent.

absl::Status CheckKeys(const Json& j, std::string_view where,
                       std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) {
    return absl::InvalidArgumentError(absl::StrCat(Av(where), " must be an object"));
  }
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      return absl::InvalidArgumentError(
          absl::StrCat("unknown key '", key, "' in ", Av(where)));
    }
  }
  return absl::OkStatus();
}

absl::Status TypeError(std::string_view key, std::string_view expected) {
  return absl::InvalidArgumentError(
      absl::StrCat("'", Av(key), "' must be ", Av(expected)));
}

absl::Status ReadUInt(const Json& j, std::string_view key, std::uint64_t& out) {
  auto it = j.find(key);
  if (it == j.end()) return absl::OkStatus();
  if (!it->is_number_unsigned()) return TypeError(key, "a non-negative integer");
  out = it->get<std::uint64_t>();
  return absl::OkStatus();
}

absl::Status ReadSize(const Json& j, std::string_view key, std::size_t& out) {
  std::uint64_t v = out;
  GLEAK_RETURN_IF_ERROR(ReadUInt(j, key, v));
  out = static_cast<std::size_t>(v);
  return absl::OkStatus();
}

// Numbers, or the strings "inf" / "-inf".
absl::Status ReadDouble(const Json& j, std::string_view key, double& out) {
  auto it = j.find(key);
  if (it == j.end()) return absl::OkStatus();
  if (it->is_number()) {
    out = it->get<double>();
  } else if (it->is_string() && (*it == "inf" || *it == "-inf")) {
    out = *it == "inf" ? std::numeric_limits<double>::infinity()
                       : -std::numeric_limits<double>::infinity();
  } else {
    return TypeError(key, "a number");
  }
  return absl::OkStatus();
}

absl::Status ReadString(const Json& j, std::string_view key, std::string& out) {
  auto it = j.find(key);
  if (it == j.end()) return absl::OkStatus();
  if (!it->is_string()) return TypeError(key, "a string");
  out = it->get<std::string>();
  return absl::OkStatus();
}

// A list of non-negative integers; a bare integer reads as a one-element list.
absl::Status ReadSizeList(const Json& j, std::string_view key,
                          std::vector<std::size_t>& out) {
  auto it = j.find(key);
  if (it == j.end()) return absl::OkStatus();
  std::vector<std::size_t> values;
  if (it->is_number_unsigned()) {
    values.push_back(it->get<std::size_t>());
  } else if (it->is_array()) {
    for (const auto& v : *it) {
      if (!v.is_number_unsigned()) return TypeError(key, "a list of non-negative integers");
      values.push_back(v.get<std::size_t>());
    }
  } else {
    return TypeError(key, "a list of non-negative integers");
  }
  out = std::move(values);
  return absl::OkStatus();
}

Json DoubleJson(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

Json SizeListJson(const std::vector<std::size_t>& v) {
  if (v.size() == 1) return v.front();
  return v;
}

absl::Status ReadSchedule(const Json& j, std::string_view where, MlpSchedule& s) {
  GLEAK_RETURN_IF_ERROR(
      CheckKeys(j, where, {"hidden", "learning_rate", "epochs", "batch_size"}));
  GLEAK_RETURN_IF_ERROR(ReadSizeList(j, "hidden", s.hidden));
  GLEAK_RETURN_IF_ERROR(ReadDouble(j, "learning_rate", s.learning_rate));
  GLEAK_RETURN_IF_ERROR(ReadSizeList(j, "epochs", s.epochs));
  GLEAK_RETURN_IF_ERROR(ReadSizeList(j, "batch_size", s.batch_size));
  return absl::OkStatus();
}

Json ScheduleJson(const MlpSchedule& s) {
  return Json{{"hidden", s.hidden},
              {"learning_rate", s.learning_rate},
              {"epochs", SizeListJson(s.epochs)},
              {"batch_size", SizeListJson(s.batch_size)}};
}

MlpSchedule Schedule(std::vector<std::size_t> hidden, std::vector<std::size_t> epochs,
                     std::vector<std::size_t> batch) {
  MlpSchedule s;
  s.hidden = std::move(hidden);
  s.epochs = std::move(epochs);
  s.batch_size = std::move(batch);
  return s;
}

bool KnownScenario(std::string_view id) {
  return std::find(std::begin(kScenarioIds), std::end(kScenarioIds), id) !=
         std::end(kScenarioIds);
}

}  // namespace

MlpConfig MlpSchedule::ForSize(std::size_t size_index) const {
  MlpConfig c;
  c.hidden = hidden;
  c.learning_rate = learning_rate;
  c.epochs = epochs.size() == 1 ? epochs.front() : epochs.at(size_index);
  c.batch_size = batch_size.size() == 1 ? batch_size.front() : batch_size.at(size_index);
  return c;
}

absl::Status MlpSchedule::Validate(std::size_t num_sizes) const {
  for (const auto* list : {&epochs, &batch_size}) {
    if (list->size() != 1 && list->size() != num_sizes) {
      return absl::InvalidArgumentError(absl::StrCat(
          "MLP epochs and batch sizes need 1 or ", num_sizes, " entries"));
    }
  }
  for (std::size_t i = 0; i < std::max(epochs.size(), batch_size.size()); ++i) {
    GLEAK_RETURN_IF_ERROR(ForSize(std::min(i, num_sizes - 1)).Validate());
  }
  return absl::OkStatus();
}

absl::Status TrialMatrixConfig::Validate() const {
  if (!KnownScenario(scenario)) {
    return absl::InvalidArgumentError(absl::StrCat("unknown scenario '", scenario, "'"));
  }
  if (methods.empty()) return absl::InvalidArgumentError("no estimation method selected");
  if (sizes.empty()) return absl::InvalidArgumentError("no training size selected");
  for (std::size_t m : sizes) {
    if (m == 0) return absl::InvalidArgumentError("training sizes must be positive");
  }
  if (training_sets == 0 || validation_sets == 0) {
    return absl::InvalidArgumentError("I and J must be at least 1");
  }
  if (validation_size == 0) {
    return absl::InvalidArgumentError("validation size must be positive");
  }
  const bool learns = std::any_of(methods.begin(), methods.end(), [](auto m) {
    return m != EstimationMethod::kFrequentist;
  });
  if (learns) {
    if (learners.empty()) return absl::InvalidArgumentError("no learner selected");
    if (std::find(learners.begin(), learners.end(), LearnerKind::kNone) != learners.end()) {
      return absl::InvalidArgumentError("pre-processing methods need knn or mlp");
    }
  }
  GLEAK_RETURN_IF_ERROR(mlp_data.Validate(sizes.size()));
  GLEAK_RETURN_IF_ERROR(mlp_channel.Validate(sizes.size()));
  if (scenario == "multi-guess") {
    GLEAK_RETURN_IF_ERROR(geometric.Validate());
    if (tries < 1 || tries >= geometric.secrets) {
      return absl::InvalidArgumentError("tries must be in [1, secrets)");
    }
  } else if (scenario == "location") {
    GLEAK_RETURN_IF_ERROR(grid.Validate());
  } else if (scenario == "dp") {
    GLEAK_RETURN_IF_ERROR(dp.Validate());
  } else {
    GLEAK_RETURN_IF_ERROR(password.Validate());
  }
  return absl::OkStatus();
}

std::string TrialMatrixConfig::ToJson() const {
  Json j;
  j["schema"] = std::string(kConfigSchema);
  j["scenario"] = scenario;
  j["profile"] = profile;
  Json ms = Json::array();
  for (auto m : methods) ms.push_back(std::string(MethodName(m)));
  j["methods"] = ms;
  Json ls = Json::array();
  for (auto l : learners) ls.push_back(std::string(LearnerName(l)));
  j["learners"] = ls;
  j["sizes"] = sizes;
  j["training_sets"] = training_sets;
  j["validation_sets"] = validation_sets;
  j["validation_size"] = validation_size;
  j["master_seed"] = master_seed;
  j["workers"] = workers;
  j["mlp"] = {{"data-preproc", ScheduleJson(mlp_data)},
              {"channel-preproc", ScheduleJson(mlp_channel)}};
  if (scenario == "multi-guess") {
    j[scenario] = {{"nu", DoubleJson(geometric.nu)},
                   {"secrets", geometric.secrets},
                   {"observables", geometric.observables},
                   {"scale", geometric.scale},
                   {"offset", geometric.offset},
                   {"bucket_width", geometric.bucket_width},
                   {"tries", tries}};
  } else if (scenario == "location") {
    j[scenario] = {{"rows", grid.rows},
                   {"cols", grid.cols},
                   {"cell_meters", grid.cell_meters},
                   {"center_lat", grid.center_lat},
                   {"center_lon", grid.center_lon},
                   {"gamma", grid.gamma},
                   {"alpha", grid.alpha},
                   {"nu", DoubleJson(grid.nu)},
                   {"checkins", checkins_path},
                   {"latitude_column", checkin_columns.latitude},
                   {"longitude_column", checkin_columns.longitude}};
  } else if (scenario == "dp") {
    j[scenario] = {{"counts", dp.counts},
                   {"removed_label", dp.removed_label},
                   {"nu", DoubleJson(dp.nu)},
                   {"tail_mass", dp.tail_mass},
                   {"severity_file", severity_path},
                   {"severity_column", severity_column}};
  } else if (scenario == "password") {
    j[scenario] = {{"total_bits", password.total_bits},
                   {"prefix_bits", password.prefix_bits},
                   {"target_bit", password.target_bit},
                   {"nu", DoubleJson(password.nu)}};
  }
  return j.dump(2);
}

absl::StatusOr<TrialMatrixConfig> ProfileConfig(std::string_view scenario,
                                                std::string_view profile) {
  if (!KnownScenario(scenario)) {
    return absl::InvalidArgumentError(
        absl::StrCat("unknown scenario '", Av(scenario), "'; expected one of ",
                     absl::StrJoin(kScenarioIds, ", ", [](std::string* out, auto s) {
                       out->append(s);
                     })));
  }
  const bool paper = profile == "paper";
  if (!paper && profile != "desk") {
    return absl::InvalidArgumentError(
        absl::StrCat("unknown profile '", Av(profile), "'; expected desk or paper"));
  }
  TrialMatrixConfig c;
  c.scenario = std::string(scenario);
  c.profile = std::string(profile);
  c.methods = {EstimationMethod::kDataPreproc, EstimationMethod::kChannelPreproc,
               EstimationMethod::kFrequentist};
  c.learners = {LearnerKind::kKnn, LearnerKind::kMlp};
  c.training_sets = paper ? 5 : 3;
  c.validation_sets = paper ? 50 : 10;
  c.validation_size = paper ? 50000 : 10000;
  c.sizes = paper ? std::vector<std::size_t>{10000, 30000, 50000}
                  : std::vector<std::size_t>{2000, 10000, 30000};
  const std::vector<std::size_t> narrow = {100, 100, 100};

  if (scenario == "multi-guess") {
    c.geometric = paper ? GeometricChannelConfig::Paper() : GeometricChannelConfig::Desk();
    c.mlp_data = Schedule(narrow, {paper ? 700u : 200u}, {1000});
    c.mlp_channel = Schedule(narrow, {paper ? 500u : 200u}, {1000});
  } else if (scenario == "location") {
    if (paper) {
      c.sizes = {100, 1000, 10000};
      c.mlp_data = Schedule({500, 500, 500}, {1000}, {200, 500, 1000});
      c.mlp_channel = Schedule({500, 500, 500}, {200, 500, 1000}, {20, 200, 500});
    } else {
      c.mlp_data = Schedule(narrow, {100}, {200, 500, 1000});
      c.mlp_channel = Schedule(narrow, {100}, {200});
    }
  } else if (scenario == "dp") {
    c.mlp_data = Schedule(narrow, {paper ? 500u : 100u}, {200});
    c.mlp_channel = c.mlp_data;
  } else {
    c.mlp_data = Schedule(narrow, {paper ? 700u : 100u}, {1000});
    c.mlp_channel = c.mlp_data;
  }
  return c;
}

absl::StatusOr<TrialMatrixConfig> ParseConfig(std::string_view text) {
  const Json j = Json::parse(text.begin(), text.end(), nullptr, false);
  if (j.is_discarded()) return absl::InvalidArgumentError("configuration is not valid JSON");
  GLEAK_RETURN_IF_ERROR(CheckKeys(
      j, "configuration",
      {"schema", "scenario", "profile", "methods", "learners", "sizes", "training_sets",
       "validation_sets", "validation_size", "master_seed", "workers", "mlp",
       "multi-guess", "location", "dp", "password"}));
  std::string schema;
  GLEAK_RETURN_IF_ERROR(ReadString(j, "schema", schema));
  if (schema != kConfigSchema) {
    return absl::InvalidArgumentError(absl::StrCat(
        "configuration schema must be '", Av(kConfigSchema), "', got '", schema, "'"));
  }
  std::string scenario = "multi-guess";
  std::string profile = "desk";
  GLEAK_RETURN_IF_ERROR(ReadString(j, "scenario", scenario));
  GLEAK_RETURN_IF_ERROR(ReadString(j, "profile", profile));
  GLEAK_ASSIGN_OR_RETURN(TrialMatrixConfig c, ProfileConfig(scenario, profile));

  if (auto it = j.find("methods"); it != j.end()) {
    if (!it->is_array()) return TypeError("methods", "a list");
    c.methods.clear();
    for (const auto& v : *it) {
      if (!v.is_string()) return TypeError("methods", "a list of names");
      GLEAK_ASSIGN_OR_RETURN(auto m, ParseMethod(v.get<std::string>()));
      c.methods.push_back(m);
    }
  }
  if (auto it = j.find("learners"); it != j.end()) {
    if (!it->is_array()) return TypeError("learners", "a list");
    c.learners.clear();
    for (const auto& v : *it) {
      if (!v.is_string()) return TypeError("learners", "a list of names");
      GLEAK_ASSIGN_OR_RETURN(auto l, ParseLearner(v.get<std::string>()));
      c.learners.push_back(l);
    }
  }
  GLEAK_RETURN_IF_ERROR(ReadSizeList(j, "sizes", c.sizes));
  GLEAK_RETURN_IF_ERROR(ReadSize(j, "training_sets", c.training_sets));
  GLEAK_RETURN_IF_ERROR(ReadSize(j, "validation_sets", c.validation_sets));
  GLEAK_RETURN_IF_ERROR(ReadSize(j, "validation_size", c.validation_size));
  GLEAK_RETURN_IF_ERROR(ReadUInt(j, "master_seed", c.master_seed));
  GLEAK_RETURN_IF_ERROR(ReadSize(j, "workers", c.workers));
  if (auto it = j.find("mlp"); it != j.end()) {
    GLEAK_RETURN_IF_ERROR(CheckKeys(*it, "mlp", {"data-preproc", "channel-preproc"}));
    if (auto d = it->find("data-preproc"); d != it->end()) {
      GLEAK_RETURN_IF_ERROR(ReadSchedule(*d, "mlp.data-preproc", c.mlp_data));
    }
    if (auto d = it->find("channel-preproc"); d != it->end()) {
      GLEAK_RETURN_IF_ERROR(ReadSchedule(*d, "mlp.channel-preproc", c.mlp_channel));
    }
  }

  for (std::string_view other : kScenarioIds) {
    if (other != c.scenario && j.contains(other)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "block '", Av(other), "' does not match scenario '", c.scenario, "'"));
    }
  }
  if (auto it = j.find(c.scenario); it != j.end()) {
    const Json& s = *it;
    if (c.scenario == "multi-guess") {
      GLEAK_RETURN_IF_ERROR(CheckKeys(s, c.scenario,
                                      {"nu", "secrets", "observables", "scale", "offset",
                                       "bucket_width", "tries"}));
      GLEAK_RETURN_IF_ERROR(ReadDouble(s, "nu", c.geometric.nu));
      GLEAK_RETURN_IF_ERROR(ReadSize(s, "secrets", c.geometric.secrets));
      GLEAK_RETURN_IF_ERROR(ReadSize(s, "observables", c.geometric.observables));
      GLEAK_RETURN_IF_ERROR(ReadDouble(s, "scale", c.geometric.scale));
      GLEAK_RETURN_IF_ERROR(ReadDouble(s, "offset", c.geometric.offset));
      GLEAK_RETURN_IF_ERROR(ReadSize(s, "bucket_width", c.geometric.bucket_width));
      GLEAK_RETURN_IF_ERROR(ReadSize(s, "tries", c.tries));
    } else if (c.scenario == "location") {
      GLEAK_RETURN_IF_ERROR(CheckKeys(
          s, c.scenario,
          {"rows", "cols", "cell_meters", "center_lat", "center_lon", "gamma", "alpha",
           "nu", "checkins", "latitude_column", "longitude_column"}));
      GLEAK_RETURN_IF_ERROR(ReadSize(s, "rows", c.grid.rows));
      GLEAK_RETURN_IF_ERROR(ReadSize(s, "cols", c.grid.cols));
      GLEAK_RETURN_IF_ERROR(ReadDouble(s, "cell_meters", c.grid.cell_meters));
      GLEAK_RETURN_IF_ERROR(ReadDouble(s, "center_lat", c.grid.center_lat));
      GLEAK_RETURN_IF_ERROR(ReadDouble(s, "center_lon", c.grid.center_lon));
      GLEAK_RETURN_IF_ERROR(ReadDouble(s, "gamma", c.grid.gamma));
      GLEAK_RETURN_IF_ERROR(ReadDouble(s, "alpha", c.grid.alpha));
      GLEAK_RETURN_IF_ERROR(ReadDouble(s, "nu", c.grid.nu));
      GLEAK_RETURN_IF_ERROR(ReadString(s, "checkins", c.checkins_path));
      GLEAK_RETURN_IF_ERROR(ReadSize(s, "latitude_column", c.checkin_columns.latitude));
      GLEAK_RETURN_IF_ERROR(ReadSize(s, "longitude_column", c.checkin_columns.longitude));
    } else if (c.scenario == "dp") {
      GLEAK_RETURN_IF_ERROR(CheckKeys(s, c.scenario,
                                      {"counts", "removed_label", "nu", "tail_mass",
                                       "severity_file", "severity_column"}));
      if (auto counts = s.find("counts"); counts != s.end()) {
        if (!counts->is_array() || counts->size() != kSeverityClasses) {
          return TypeError("counts", "a list of 5 integers");
        }
        for (std::size_t i = 0; i < kSeverityClasses; ++i) {
          if (!(*counts)[i].is_number_integer()) return TypeError("counts", "a list of 5 integers");
          c.dp.counts[i] = (*counts)[i].get<std::int64_t>();
        }
      }
      GLEAK_RETURN_IF_ERROR(ReadSize(s, "removed_label", c.dp.removed_label));
      GLEAK_RETURN_IF_ERROR(ReadDouble(s, "nu", c.dp.nu));
      GLEAK_RETURN_IF_ERROR(ReadDouble(s, "tail_mass", c.dp.tail_mass));
      GLEAK_RETURN_IF_ERROR(ReadString(s, "severity_file", c.severity_path));
      GLEAK_RETURN_IF_ERROR(ReadSize(s, "severity_column", c.severity_column));
    } else {
      GLEAK_RETURN_IF_ERROR(CheckKeys(s, c.scenario,
                                      {"total_bits", "prefix_bits", "target_bit", "nu"}));
      GLEAK_RETURN_IF_ERROR(ReadSize(s, "total_bits", c.password.total_bits));
      GLEAK_RETURN_IF_ERROR(ReadSize(s, "prefix_bits", c.password.prefix_bits));
      GLEAK_RETURN_IF_ERROR(ReadSize(s, "target_bit", c.password.target_bit));
      GLEAK_RETURN_IF_ERROR(ReadDouble(s, "nu", c.password.nu));
    }
  }
  GLEAK_RETURN_IF_ERROR(c.Validate());
  return c;
}

absl::StatusOr<TrialMatrixConfig> ReadConfigFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::ostringstream text;
  text << in.rdbuf();
  return ParseConfig(text.str());
}

absl::StatusOr<ScenarioInstance> BuildScenario(const TrialMatrixConfig& config) {
  GLEAK_RETURN_IF_ERROR(config.Validate());
  if (config.scenario == "multi-guess") {
    return MultiGuessScenario(config.geometric, config.tries);
  }
  if (config.scenario == "location") {
    std::optional<Prior> prior;
    if (!config.checkins_path.empty()) {
      GLEAK_ASSIGN_OR_RETURN(
          CheckinIngest ingest,
          IngestCheckinFile(config.checkins_path, config.grid, config.checkin_columns));
      prior = std::move(ingest.prior);
    }
    return LocationScenario(config.grid, std::move(prior));
  }
  if (config.scenario == "dp") {
    DpScenarioConfig dp = config.dp;
    if (!config.severity_path.empty()) {
      GLEAK_ASSIGN_OR_RETURN(dp.counts, ReadSeverityHistogramFile(config.severity_path,
                                                                  config.severity_column));
    }
    return DpScenario(dp);
  }
  return PasswordScenario(config.password);
}

}  // namespace gleak
