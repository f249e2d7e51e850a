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


#include "gleak/harness/trial_matrix.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "gleak/matrix.h"
#include "gleak/rng.h"
#include "gleak/sampling.h"
#include "gleak/status_macros.h"
#include "json.hpp"
#include "../string_compat.h"

namespace gleak {
namespace {

using Json = nlohmann::ordered_json;
using internal::Av;

// Round-trip precision, independent of locale-free absl formatting defaults.
std::string Exact(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double Quantile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

Json BoxJson(const BoxStats& b) {
  return Json{{"min", b.min}, {"q1", b.q1}, {"median", b.median}, {"q3", b.q3},
              {"max", b.max}};
}

struct CellSpec {
  EstimationMethod method;
  LearnerKind learner;
  std::size_t size_index;
};

std::vector<CellSpec> EnumerateCells(const TrialMatrixConfig& config) {
  std::vector<CellSpec> cells;
  for (EstimationMethod method : config.methods) {
    std::vector<LearnerKind> learners = config.learners;
    if (method == EstimationMethod::kFrequentist) learners = {LearnerKind::kNone};
    for (LearnerKind learner : learners) {
      for (std::size_t s = 0; s < config.sizes.size(); ++s) {
        cells.push_back({method, learner, s});
      }
    }
  }
  return cells;
}

std::size_t WorkerCount(const TrialMatrixConfig& config, std::size_t tasks) {
  std::size_t n = config.workers;
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return std::max<std::size_t>(1, std::min(n, tasks));
}

// Runs fn(0..count-1) on a pool; returns the error of the lowest failing
// index, if any.
absl::Status ParallelFor(std::size_t count, std::size_t workers,
                         const std::function<absl::Status(std::size_t)>& fn) {
  std::vector<absl::Status> status(count);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next++; k < count; k = next++) status[k] = fn(k);
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (auto& s : status) {
    if (!s.ok()) return s;
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<BoxStats> ComputeBoxStats(std::vector<double> values) {
  if (values.empty()) return absl::InvalidArgumentError("no values to summarize");
  std::sort(values.begin(), values.end());
  return BoxStats{values.front(), Quantile(values, 0.25), Quantile(values, 0.5),
                  Quantile(values, 0.75), values.back()};
}

absl::StatusOr<CellMetrics> ComputeCellMetrics(EstimationMethod method,
                                               LearnerKind learner, std::size_t m,
                                               std::size_t n, std::size_t rows,
                                               std::size_t cols,
                                               std::vector<double> estimates,
                                               double exact) {
  if (!(exact != 0.0) || !std::isfinite(exact)) {
    return absl::InvalidArgumentError(
        "exact vulnerability is 0; the normalized error is undefined");
  }
  if (rows == 0 || cols == 0 || estimates.size() != rows * cols) {
    return absl::InvalidArgumentError("estimates do not form an I x J matrix");
  }
  CellMetrics c;
  c.method = method;
  c.learner = learner;
  c.m = m;
  c.n = n;
  c.training_sets = rows;
  c.validation_sets = cols;
  c.deltas.reserve(estimates.size());
  for (double e : estimates) c.deltas.push_back(std::abs(e - exact) / std::abs(exact));
  c.estimates = std::move(estimates);

  const double count = static_cast<double>(c.deltas.size());
  c.mean = KahanTotal(c.deltas) / count;
  KahanSum spread;
  KahanSum squares;
  for (double d : c.deltas) {
    spread.Add((d - c.mean) * (d - c.mean));
    squares.Add(d * d);
  }
  c.dispersion = std::sqrt(spread.value() / count);
  c.total_error = std::sqrt(squares.value() / count);
  GLEAK_ASSIGN_OR_RETURN(c.delta_box, ComputeBoxStats(c.deltas));
  GLEAK_ASSIGN_OR_RETURN(c.estimate_box, ComputeBoxStats(c.estimates));
  return c;
}

std::string MetricsReport::ToJson() const {
  Json j;
  j["schema"] = "leak-report/1";
  j["scenario"] = scenario;
  j["exact"] = exact;
  Json config = Json::parse(config_json, nullptr, false);
  // The worker count does not affect results; leaving it out keeps the
  // summary byte-identical across machines.
  if (config.is_object()) config.erase("workers");
  j["config"] = config.is_discarded() ? Json(config_json) : config;
  j["sampling"] =
      "training sets are drawn independently per (size, i); the J validation "
      "sets are shared by every model";
  Json cells_json = Json::array();
  for (const CellMetrics& c : cells) {
    cells_json.push_back(Json{{"method", std::string(MethodName(c.method))},
                              {"learner", std::string(LearnerName(c.learner))},
                              {"m", c.m},
                              {"n", c.n},
                              {"I", c.training_sets},
                              {"J", c.validation_sets},
                              {"mean", c.mean},
                              {"dispersion", c.dispersion},
                              {"total_error", c.total_error},
                              {"delta", BoxJson(c.delta_box)},
                              {"estimate", BoxJson(c.estimate_box)},
                              {"deltas", c.deltas}});
  }
  j["cells"] = std::move(cells_json);
  return j.dump(2);
}

absl::StatusOr<MetricsReport> RunTrialMatrix(const TrialMatrixConfig& config,
                                             const ScenarioInstance& scenario,
                                             const ProgressFn& progress) {
  GLEAK_RETURN_IF_ERROR(config.Validate());
  const double exact = scenario.exact_vulnerability;
  if (!(exact != 0.0)) {
    return absl::InvalidArgumentError(
        "exact vulnerability is 0; the normalized error is undefined");
  }
  const std::size_t rows = config.training_sets;
  const std::size_t cols = config.validation_sets;
  const std::uint64_t seed = config.master_seed;
  std::mutex log_mu;
  auto log = [&](std::string_view line) {
    if (!progress) return;
    std::lock_guard<std::mutex> lock(log_mu);
    progress(line);
  };

  std::vector<SampleSet> validation(cols);
  const std::size_t workers = WorkerCount(config, cols);
  GLEAK_RETURN_IF_ERROR(ParallelFor(cols, workers, [&](std::size_t j) -> absl::Status {
    GLEAK_ASSIGN_OR_RETURN(
        validation[j],
        SampleJoint(scenario.prior, *scenario.channel, config.validation_size, seed,
                    StreamId({StreamTag("validation"), j})));
    return absl::OkStatus();
  }));

  const std::vector<CellSpec> cells = EnumerateCells(config);
  std::vector<std::vector<double>> estimates(cells.size(),
                                             std::vector<double>(rows * cols));
  const std::size_t tasks = cells.size() * rows;
  auto train_and_evaluate = [&](std::size_t task) -> absl::Status {
    const CellSpec& cell = cells[task / rows];
    const std::size_t i = task % rows;
    const std::size_t m = config.sizes[cell.size_index];
    EstimateSeeds seeds;
    seeds.master_seed = seed;
    seeds.learner_stream =
        StreamId({StreamTag("learner"), static_cast<std::uint64_t>(cell.method),
                  static_cast<std::uint64_t>(cell.learner), m, i});
    LearnerConfig learner;
    learner.kind = cell.learner;
    learner.metric = scenario.metric;

    std::optional<TrainedModel> model;
    if (cell.method == EstimationMethod::kChannelPreproc) {
      seeds.train_stream = StreamId({StreamTag("channel-train"), m, i});
      learner.mlp = config.mlp_channel.ForSize(cell.size_index);
      GLEAK_ASSIGN_OR_RETURN(model, TrainChannelPreproc(scenario.prior, *scenario.channel,
                                                        scenario.gain, m, learner, seeds));
    } else {
      seeds.train_stream = StreamId({StreamTag("train"), m, i});
      GLEAK_ASSIGN_OR_RETURN(SampleSet train,
                             SampleJoint(scenario.prior, *scenario.channel, m, seed,
                                         seeds.train_stream));
      if (cell.method == EstimationMethod::kFrequentist) {
        GLEAK_ASSIGN_OR_RETURN(model, TrainFrequentist(train, scenario.gain, seeds));
      } else {
        learner.mlp = config.mlp_data.ForSize(cell.size_index);
        GLEAK_ASSIGN_OR_RETURN(model,
                               TrainDataPreproc(train, scenario.gain, learner, seeds));
      }
    }
    for (std::size_t j = 0; j < cols; ++j) {
      GLEAK_ASSIGN_OR_RETURN(EstimateReport r,
                             Evaluate(*model, validation[j], scenario.gain));
      estimates[task / rows][i * cols + j] = r.estimate;
    }
    log(absl::StrCat(Av(MethodName(cell.method)), "/", Av(LearnerName(cell.learner)), " m=", m,
                     " i=", i, " trained in ", model->train_seconds, "s"));
    return absl::OkStatus();
  };
  GLEAK_RETURN_IF_ERROR(
      ParallelFor(tasks, WorkerCount(config, tasks), train_and_evaluate));

  MetricsReport report;
  report.scenario = config.scenario;
  report.exact = exact;
  report.config_json = config.ToJson();
  for (std::size_t c = 0; c < cells.size(); ++c) {
    GLEAK_ASSIGN_OR_RETURN(
        CellMetrics metrics,
        ComputeCellMetrics(cells[c].method, cells[c].learner,
                           config.sizes[cells[c].size_index], config.validation_size,
                           rows, cols, std::move(estimates[c]), exact));
    report.cells.push_back(std::move(metrics));
  }
  return report;
}

absl::StatusOr<MetricsReport> RunTrialMatrix(const TrialMatrixConfig& config,
                                             const ProgressFn& progress) {
  GLEAK_ASSIGN_OR_RETURN(ScenarioInstance scenario, BuildScenario(config));
  return RunTrialMatrix(config, scenario, progress);
}

absl::Status EmitReports(const MetricsReport& report, const std::string& prefix) {
  if (prefix.empty()) return absl::InvalidArgumentError("output prefix is empty");
  const std::filesystem::path parent = std::filesystem::path(prefix).parent_path();
  if (!parent.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(parent, ec);
    if (ec) {
      return absl::PermissionDeniedError(
          absl::StrCat("cannot create ", parent.string(), ": ", ec.message()));
    }
  }
  auto write = [](const std::string& path, const std::string& body) -> absl::Status {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << body;
    out.close();
    if (!out) return absl::PermissionDeniedError(absl::StrCat("cannot write ", path));
    return absl::OkStatus();
  };

  GLEAK_RETURN_IF_ERROR(write(prefix + ".summary.json", report.ToJson() + "\n"));

  std::string trials = "scenario,method,learner,m,n,i,j,estimate,exact,delta\n";
  for (const CellMetrics& c : report.cells) {
    for (std::size_t i = 0; i < c.training_sets; ++i) {
      for (std::size_t j = 0; j < c.validation_sets; ++j) {
        const std::size_t k = i * c.validation_sets + j;
        absl::StrAppend(&trials, report.scenario, ",", Av(MethodName(c.method)), ",",
                        Av(LearnerName(c.learner)), ",", c.m, ",", c.n, ",", i, ",", j, ",",
                        Exact(c.estimates[k]), ",", Exact(report.exact), ",",
                        Exact(c.deltas[k]), "\n");
      }
    }
  }
  GLEAK_RETURN_IF_ERROR(write(prefix + ".trials.csv", trials));

  std::string box = "scenario,method,learner,m,quantity,min,q1,median,q3,max,mean\n";
  for (const CellMetrics& c : report.cells) {
    const double est_mean = KahanTotal(c.estimates) / static_cast<double>(c.estimates.size());
    for (const auto& [name, b, mean] :
         {std::tuple<const char*, const BoxStats&, double>{"delta", c.delta_box, c.mean},
          {"estimate", c.estimate_box, est_mean}}) {
      absl::StrAppend(&box, report.scenario, ",", Av(MethodName(c.method)), ",",
                      Av(LearnerName(c.learner)), ",", c.m, ",", name, ",", Exact(b.min), ",",
                      Exact(b.q1), ",", Exact(b.median), ",", Exact(b.q3), ",",
                      Exact(b.max), ",", Exact(mean), "\n");
    }
  }
  return write(prefix + ".boxplot.csv", box);
}

}  // namespace gleak
