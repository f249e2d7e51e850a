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


// leak: exact and estimated g-vulnerability from the command line.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "acceptance.h"
#include "gleak/bounds.h"
#include "gleak/estimation.h"
#include "gleak/harness/config.h"
#include "gleak/harness/trial_matrix.h"
#include "gleak/preprocess.h"
#include "gleak/qif.h"
#include "gleak/rng.h"
#include "gleak/sampling.h"
#include "gleak/status_macros.h"
#include "gleak/text_io.h"
#include "json.hpp"

namespace gleak {
namespace {

using Json = nlohmann::ordered_json;

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

int ExitCode(const absl::Status& status) {
  switch (status.code()) {
    case absl::StatusCode::kOk:
      return 0;
    case absl::StatusCode::kInternal:
    case absl::StatusCode::kOutOfRange:
      return kExitNumerical;
    default:
      return kExitValidation;
  }
}

struct CommonFlags {
  // Unset keeps the seed of the config file or profile.
  std::optional<std::uint64_t> seed;
  std::string profile = "desk";
  std::string out;
};

// Problem definition: either a built-in scenario or prior/channel/gain files.
struct ProblemFlags {
  std::string scenario;
  std::string config;
  std::string prior;
  std::string channel;
  std::string gain;
};

void AddProblemFlags(CLI::App* app, ProblemFlags& p) {
  app->add_option("--scenario", p.scenario, "Built-in scenario")
      ->check(CLI::IsMember({"multi-guess", "location", "dp", "password"}));
  app->add_option("--config", p.config, "Configuration file (leak-config/1 JSON)");
  app->add_option("--prior", p.prior, "Prior file: one line of |X| probabilities");
  app->add_option("--channel", p.channel, "Channel file: '|X| |Y|' then |X| rows");
  app->add_option("--gain", p.gain, "Gain file: '|W| |X|' then |W| rows");
}

void AddCommonFlags(CLI::App* app, CommonFlags& c) {
  app->add_option("--seed", c.seed, "Master seed");
  app->add_option("--profile", c.profile, "Size profile")
      ->check(CLI::IsMember({"desk", "paper"}));
  app->add_option("--out", c.out, "Output path prefix");
}

absl::StatusOr<TrialMatrixConfig> ResolveConfig(const ProblemFlags& p,
                                                const CommonFlags& c,
                                                const std::string& fallback) {
  TrialMatrixConfig config;
  if (!p.config.empty()) {
    GLEAK_ASSIGN_OR_RETURN(config, ReadConfigFile(p.config));
    if (!p.scenario.empty() && p.scenario != config.scenario) {
      return absl::InvalidArgumentError(absl::StrCat(
          "--scenario ", p.scenario, " conflicts with config scenario ", config.scenario));
    }
  } else {
    GLEAK_ASSIGN_OR_RETURN(
        config, ProfileConfig(p.scenario.empty() ? fallback : p.scenario, c.profile));
  }
  if (c.seed) config.master_seed = *c.seed;
  return config;
}

bool UsesFiles(const ProblemFlags& p) {
  return !p.prior.empty() || !p.channel.empty() || !p.gain.empty();
}

// Loads a file-defined problem into the shape of a scenario.
absl::StatusOr<ScenarioInstance> FileProblem(const ProblemFlags& p) {
  if (p.prior.empty() || p.channel.empty() || p.gain.empty()) {
    return absl::InvalidArgumentError("--prior, --channel and --gain go together");
  }
  if (!p.scenario.empty()) {
    return absl::InvalidArgumentError("use either --scenario or problem files");
  }
  GLEAK_ASSIGN_OR_RETURN(Prior prior, ReadPriorFile(p.prior));
  GLEAK_ASSIGN_OR_RETURN(Channel channel, ReadChannelFile(p.channel));
  GLEAK_ASSIGN_OR_RETURN(GainFunction gain, ReadGainFile(p.gain));
  GLEAK_ASSIGN_OR_RETURN(double v, PosteriorVulnerability(prior, channel, gain));
  const std::size_t ny = channel.output().size();
  GLEAK_ASSIGN_OR_RETURN(FeatureCodec codec,
                         FeatureCodec::Uniform(1, std::max(1.0, ny / 10.0)));
  auto sampler = std::make_shared<MatrixChannelSampler>(channel);
  return ScenarioInstance{"files",
                          std::move(prior),
                          std::move(sampler),
                          std::move(channel),
                          std::move(gain),
                          v,
                          {MetricKind::kAbsoluteNumeric, std::move(codec)},
                          ny};
}

absl::StatusOr<ScenarioInstance> LoadProblem(const ProblemFlags& p,
                                             const TrialMatrixConfig& config) {
  if (UsesFiles(p)) return FileProblem(p);
  return BuildScenario(config);
}

absl::Status Emit(const CommonFlags& c, const std::string& suffix, const Json& j) {
  const std::string text = j.dump(2);
  std::cout << text << "\n";
  if (c.out.empty()) return absl::OkStatus();
  const auto parent = std::filesystem::path(c.out).parent_path();
  if (!parent.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(parent, ec);
  }
  return WriteFile(c.out + suffix, [&](std::ostream& out) { out << text << "\n"; });
}

// ---- exact ----------------------------------------------------------------

absl::Status RunExact(const ProblemFlags& p, const CommonFlags& c) {
  const auto start = std::chrono::steady_clock::now();
  GLEAK_ASSIGN_OR_RETURN(TrialMatrixConfig config, ResolveConfig(p, c, "multi-guess"));
  GLEAK_ASSIGN_OR_RETURN(ScenarioInstance s, LoadProblem(p, config));
  GLEAK_ASSIGN_OR_RETURN(double prior_v, PriorVulnerability(s.prior, s.gain));
  double posterior = s.exact_vulnerability;
  std::string source = "closed-form";
  if (s.matrix) {
    GLEAK_ASSIGN_OR_RETURN(posterior, PosteriorVulnerability(s.prior, *s.matrix, s.gain));
    source = "channel-matrix";
  }
  Json j;
  j["scenario"] = s.id;
  j["secrets"] = s.prior.size();
  j["guesses"] = s.gain.num_guesses();
  if (s.observable_count > 0) j["observables"] = s.observable_count;
  j["source"] = source;
  j["prior_vulnerability"] = prior_v;
  j["posterior_vulnerability"] = posterior;
  j["additive_leakage"] = posterior - prior_v;
  if (prior_v > 0) j["multiplicative_leakage"] = posterior / prior_v;
  j["seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return Emit(c, ".exact.json", j);
}

// ---- estimate -------------------------------------------------------------

struct EstimateFlags {
  std::string method = "data-preproc";
  std::string learner = "knn";
  std::vector<std::size_t> sizes;
  std::size_t n = 0;
  std::size_t replica = 0;
  std::optional<std::size_t> epochs;
  std::optional<std::size_t> batch_size;
};

absl::Status RunEstimate(const ProblemFlags& p, const CommonFlags& c,
                         const EstimateFlags& e) {
  GLEAK_ASSIGN_OR_RETURN(TrialMatrixConfig config, ResolveConfig(p, c, "multi-guess"));
  GLEAK_ASSIGN_OR_RETURN(ScenarioInstance s, LoadProblem(p, config));
  GLEAK_ASSIGN_OR_RETURN(EstimationMethod method, ParseMethod(e.method));
  GLEAK_ASSIGN_OR_RETURN(LearnerKind learner, ParseLearner(e.learner));
  if (method == EstimationMethod::kFrequentist) {
    learner = LearnerKind::kNone;
  } else if (learner == LearnerKind::kNone) {
    return absl::InvalidArgumentError("this method needs --learner knn or mlp");
  }
  const std::vector<std::size_t> sizes = e.sizes.empty() ? config.sizes : e.sizes;
  const std::size_t n = e.n == 0 ? config.validation_size : e.n;
  const std::uint64_t seed = config.master_seed;

  GLEAK_ASSIGN_OR_RETURN(
      SampleSet validation,
      SampleJoint(s.prior, *s.channel, n, seed, StreamId({StreamTag("validation"), e.replica})));
  Json reports = Json::array();
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    const std::size_t m = sizes[k];
    if (m == 0) return absl::InvalidArgumentError("training sizes must be positive");
    EstimateSeeds seeds;
    seeds.master_seed = seed;
    seeds.learner_stream = StreamId({StreamTag("learner"), static_cast<std::uint64_t>(method),
                                     static_cast<std::uint64_t>(learner), m, e.replica});
    LearnerConfig lc;
    lc.kind = learner;
    lc.metric = s.metric;
    const MlpSchedule& schedule =
        method == EstimationMethod::kChannelPreproc ? config.mlp_channel : config.mlp_data;
    lc.mlp = schedule.ForSize(std::min(k, config.sizes.size() - 1));
    if (e.epochs) lc.mlp.epochs = *e.epochs;
    if (e.batch_size) lc.mlp.batch_size = *e.batch_size;

    EstimateReport r;
    if (method == EstimationMethod::kChannelPreproc) {
      seeds.train_stream = StreamId({StreamTag("channel-train"), m, e.replica});
      GLEAK_ASSIGN_OR_RETURN(r, EstimateChannelPreproc(s.prior, *s.channel, s.gain, m,
                                                       validation, lc, seeds));
    } else {
      seeds.train_stream = StreamId({StreamTag("train"), m, e.replica});
      GLEAK_ASSIGN_OR_RETURN(SampleSet train,
                             SampleJoint(s.prior, *s.channel, m, seed, seeds.train_stream));
      if (method == EstimationMethod::kFrequentist) {
        GLEAK_ASSIGN_OR_RETURN(r, FrequentistEstimate(train, validation, s.gain, seeds));
      } else {
        GLEAK_ASSIGN_OR_RETURN(r, EstimateDataPreproc(train, validation, s.gain, lc, seeds));
      }
    }
    Json j = Json::parse(r.ToJson());
    if (s.exact_vulnerability != 0.0) {
      j["exact"] = s.exact_vulnerability;
      j["normalized_error"] =
          std::abs(r.estimate - s.exact_vulnerability) / std::abs(s.exact_vulnerability);
    }
    std::cerr << absl::StrFormat("%s/%s m=%d: %.6f\n", MethodName(method).data(),
                                 LearnerName(learner).data(), m, r.estimate);
    reports.push_back(std::move(j));
  }
  Json out;
  out["scenario"] = s.id;
  out["estimates"] = std::move(reports);
  return Emit(c, ".estimate.json", out);
}

// ---- scenario -------------------------------------------------------------

struct ScenarioFlags {
  std::string id;
  std::vector<std::string> methods;
  std::vector<std::string> learners;
  std::vector<std::size_t> sizes;
  std::size_t training_sets = 0;
  std::size_t validation_sets = 0;
  std::size_t n = 0;
  std::size_t workers = 0;
  std::string checkins;
  std::string severity;
  bool quiet = false;
  bool print_config = false;
};

absl::Status RunScenario(const ProblemFlags& base, CommonFlags c, const ScenarioFlags& f) {
  ProblemFlags p = base;
  p.scenario = f.id;
  GLEAK_ASSIGN_OR_RETURN(TrialMatrixConfig config, ResolveConfig(p, c, f.id));
  if (!f.methods.empty()) {
    config.methods.clear();
    for (const auto& name : f.methods) {
      GLEAK_ASSIGN_OR_RETURN(EstimationMethod m, ParseMethod(name));
      config.methods.push_back(m);
    }
  }
  if (!f.learners.empty()) {
    config.learners.clear();
    for (const auto& name : f.learners) {
      GLEAK_ASSIGN_OR_RETURN(LearnerKind l, ParseLearner(name));
      config.learners.push_back(l);
    }
  }
  if (!f.sizes.empty()) config.sizes = f.sizes;
  if (f.training_sets > 0) config.training_sets = f.training_sets;
  if (f.validation_sets > 0) config.validation_sets = f.validation_sets;
  if (f.n > 0) config.validation_size = f.n;
  if (f.workers > 0) config.workers = f.workers;
  if (!f.checkins.empty()) config.checkins_path = f.checkins;
  if (!f.severity.empty()) config.severity_path = f.severity;
  if (f.print_config) {
    GLEAK_RETURN_IF_ERROR(config.Validate());
    std::cout << config.ToJson() << "\n";
    return absl::OkStatus();
  }
  if (c.out.empty()) c.out = absl::StrCat("leak-out/", f.id);

  ProgressFn progress;
  if (!f.quiet) progress = [](std::string_view line) { std::cerr << line << "\n"; };
  GLEAK_ASSIGN_OR_RETURN(MetricsReport report, RunTrialMatrix(config, progress));
  GLEAK_RETURN_IF_ERROR(EmitReports(report, c.out));

  std::cout << absl::StrFormat("scenario %s  exact V_g = %.6f\n", report.scenario,
                               report.exact);
  std::cout << absl::StrFormat("%-16s %-5s %8s %10s %10s %10s %10s\n", "method", "learner",
                               "m", "mean", "dispersion", "total", "median V");
  for (const CellMetrics& cell : report.cells) {
    std::cout << absl::StrFormat("%-16s %-5s %8d %10.5f %10.5f %10.5f %10.6f\n",
                                 MethodName(cell.method).data(),
                                 LearnerName(cell.learner).data(), cell.m, cell.mean,
                                 cell.dispersion, cell.total_error,
                                 cell.estimate_box.median);
  }
  std::cout << "reports: " << c.out << ".{summary.json,trials.csv,boxplot.csv}\n";
  return absl::OkStatus();
}

// ---- bounds ---------------------------------------------------------------

struct BoundsFlags {
  BoundInputs in;
  std::optional<double> sigma2;
  std::optional<double> log_hypotheses;
  std::size_t guesses = 0;
  std::size_t observables = 0;
};

absl::Status RunBounds(const CommonFlags& c, BoundsFlags f) {
  f.in.sigma2 = f.sigma2.value_or(WorstCaseVariance(f.in.a, f.in.b));
  if (f.log_hypotheses) {
    f.in.log_hypotheses = *f.log_hypotheses;
  } else if (f.guesses > 0 && f.observables > 0) {
    f.in.log_hypotheses = LogHypothesisCount(f.guesses, f.observables);
  } else if (f.guesses > 0 || f.observables > 0) {
    return absl::InvalidArgumentError("--guesses and --observables go together");
  }
  GLEAK_ASSIGN_OR_RETURN(BoundReport report, ComputeBoundReport(f.in));
  return Emit(c, ".bounds.json", Json::parse(report.ToJson()));
}

// ---- preprocess -----------------------------------------------------------

struct PreprocessFlags {
  std::string mode = "channel";
  std::string samples;
  std::size_t m = 0;
  std::uint64_t expansion_cap = 1'000'000;
};

absl::Status RunPreprocess(const ProblemFlags& p, CommonFlags c, const PreprocessFlags& f) {
  if (c.out.empty()) return absl::InvalidArgumentError("preprocess needs --out <prefix>");
  GLEAK_ASSIGN_OR_RETURN(TrialMatrixConfig config, ResolveConfig(p, c, "multi-guess"));
  // Files may define only the parts a mode needs.
  std::optional<Prior> prior;
  std::optional<GainFunction> gain;
  std::shared_ptr<const SamplingChannel> sampler;
  if (UsesFiles(p)) {
    if (p.gain.empty()) return absl::InvalidArgumentError("--gain is required");
    GLEAK_ASSIGN_OR_RETURN(gain, ReadGainFile(p.gain));
    if (!p.prior.empty()) {
      GLEAK_ASSIGN_OR_RETURN(prior, ReadPriorFile(p.prior));
    }
    if (!p.channel.empty()) {
      GLEAK_ASSIGN_OR_RETURN(Channel ch, ReadChannelFile(p.channel));
      sampler = std::make_shared<MatrixChannelSampler>(std::move(ch));
    }
  } else {
    GLEAK_ASSIGN_OR_RETURN(ScenarioInstance s, BuildScenario(config));
    prior = s.prior;
    gain = s.gain;
    sampler = s.channel;
  }

  Json j;
  if (f.mode == "channel") {
    if (!prior) return absl::InvalidArgumentError("channel mode needs a prior");
    GLEAK_ASSIGN_OR_RETURN(ChannelPreprocDerivation d, ChannelPreprocess(*prior, *gain));
    GLEAK_RETURN_IF_ERROR(
        WriteFile(c.out + ".R.txt", [&](std::ostream& out) { WriteChannel(out, d.r); }));
    GLEAK_RETURN_IF_ERROR(
        WriteFile(c.out + ".tau.txt", [&](std::ostream& out) { WritePrior(out, d.tau); }));
    j["mode"] = "channel";
    j["beta"] = d.beta;
    j["tau"] = d.tau.probs();
    j["guesses"] = d.tau.alphabet().labels();
    j["files"] = {c.out + ".R.txt", c.out + ".tau.txt"};
    if (f.m > 0) {
      if (!sampler) return absl::InvalidArgumentError("sampling needs a channel");
      GLEAK_ASSIGN_OR_RETURN(
          WeightedSampleSet set,
          SampleChannelPreprocessed(d, *sampler, f.m, config.master_seed,
                                    StreamId({StreamTag("channel-train"), f.m, 0})));
      GLEAK_RETURN_IF_ERROR(WriteFile(c.out + ".train.csv", [&](std::ostream& out) {
        WriteWeightedSampleSet(out, set);
      }));
      j["training_weight"] = set.total_weight();
      j["files"].push_back(c.out + ".train.csv");
    }
  } else if (f.mode == "data") {
    std::optional<SampleSet> train;
    if (!f.samples.empty()) {
      GLEAK_ASSIGN_OR_RETURN(train, ReadSampleSetFile(f.samples, gain->secrets()));
    } else {
      if (!sampler || !prior || f.m == 0) {
        return absl::InvalidArgumentError(
            "data mode needs --samples, or a prior, a channel and --m");
      }
      GLEAK_ASSIGN_OR_RETURN(train, SampleJoint(*prior, *sampler, f.m, config.master_seed,
                                                StreamId({StreamTag("train"), f.m, 0})));
    }
    GLEAK_ASSIGN_OR_RETURN(RationalizedGain rg, RationalizeGain(*gain, f.expansion_cap));
    GLEAK_ASSIGN_OR_RETURN(WeightedSampleSet set, DataPreprocess(*train, rg.gain));
    GLEAK_RETURN_IF_ERROR(WriteFile(c.out + ".train.csv", [&](std::ostream& out) {
      WriteWeightedSampleSet(out, set);
    }));
    j["mode"] = "data";
    j["pairs"] = train->size();
    j["gain_scale"] = rg.scale;
    j["training_weight"] = set.total_weight();
    j["distinct_entries"] = set.entries().size();
    j["files"] = {c.out + ".train.csv"};
  } else {
    return absl::InvalidArgumentError("--mode must be data or channel");
  }
  return Emit(c, ".preprocess.json", j);
}

constexpr char kScenarioFooter[] =
    "Several learners are reported side by side. Every estimate is the value of a\n"
    "concrete strategy on held-out data, so none can exceed the true vulnerability\n"
    "beyond sampling noise; when they disagree, prefer the learner with the\n"
    "largest estimate (the one exhibiting the most leakage). The harness does not\n"
    "pick one automatically.";

int Main(int argc, char** argv) {
  CLI::App app{"leak: estimate g-vulnerability of black-box systems"};
  app.require_subcommand(1);
  CommonFlags common;
  ProblemFlags problem;
  absl::Status status = absl::OkStatus();

  auto* exact = app.add_subcommand("exact", "Exact V_g and leakage of a known system");
  AddProblemFlags(exact, problem);
  AddCommonFlags(exact, common);
  exact->callback([&] { status = RunExact(problem, common); });

  EstimateFlags ef;
  auto* estimate = app.add_subcommand("estimate", "One black-box estimate per training size");
  AddProblemFlags(estimate, problem);
  AddCommonFlags(estimate, common);
  estimate->add_option("--method", ef.method)
      ->check(CLI::IsMember({"data-preproc", "channel-preproc", "frequentist"}));
  estimate->add_option("--learner", ef.learner)->check(CLI::IsMember({"knn", "mlp"}));
  estimate->add_option("--sizes,-m", ef.sizes, "Training sizes")->delimiter(',');
  estimate->add_option("--n", ef.n, "Validation size");
  estimate->add_option("--replica", ef.replica, "Replica index selecting the seed streams");
  estimate->add_option("--epochs", ef.epochs, "Override MLP epochs");
  estimate->add_option("--batch-size", ef.batch_size, "Override MLP batch size");
  estimate->callback([&] { status = RunEstimate(problem, common, ef); });

  ScenarioFlags sf;
  auto* scenario = app.add_subcommand("scenario", "Run the I x J trial matrix of a scenario");
  scenario->footer(kScenarioFooter);
  scenario->add_option("id", sf.id, "Scenario")
      ->required()
      ->check(CLI::IsMember({"multi-guess", "location", "dp", "password"}));
  scenario->add_option("--config", problem.config, "Configuration file (leak-config/1 JSON)");
  AddCommonFlags(scenario, common);
  scenario->add_option("--methods", sf.methods)->delimiter(',');
  scenario->add_option("--learners", sf.learners)->delimiter(',');
  scenario->add_option("--sizes", sf.sizes, "Training sizes")->delimiter(',');
  scenario->add_option("-I,--training-sets", sf.training_sets);
  scenario->add_option("-J,--validation-sets", sf.validation_sets);
  scenario->add_option("--n", sf.n, "Validation size");
  scenario->add_option("--workers", sf.workers, "Worker threads (default: all cores)");
  scenario->add_option("--checkins", sf.checkins, "Check-in file for the location prior");
  scenario->add_option("--severity", sf.severity, "Severity CSV for the dp scenario");
  scenario->add_flag("--quiet", sf.quiet, "No per-model progress");
  scenario->add_flag("--print-config", sf.print_config,
                     "Print the resolved configuration and exit");
  scenario->callback([&] { status = RunScenario(problem, common, sf); });

  BoundsFlags bf;
  auto* bounds = app.add_subcommand("bounds", "Distribution-free error bounds");
  AddCommonFlags(bounds, common);
  bounds->add_option("--m", bf.in.m, "Training size");
  bounds->add_option("--n", bf.in.n, "Validation size");
  bounds->add_option("--a", bf.in.a, "Smallest gain");
  bounds->add_option("--b", bf.in.b, "Largest gain");
  bounds->add_option("--sigma2", bf.sigma2, "Variance proxy (default (b-a)^2/4)");
  bounds->add_option("--log-hypotheses", bf.log_hypotheses, "ln |H|");
  bounds->add_option("--guesses", bf.guesses, "|W|, with --observables gives ln|H|");
  bounds->add_option("--observables", bf.observables, "|Y|");
  bounds->add_option("--epsilon", bf.in.epsilon);
  bounds->add_option("--delta", bf.in.delta);
  bounds->add_option("--split", bf.in.split, "Delta, the share of delta spent on N");
  bounds->callback([&] { status = RunBounds(common, bf); });

  PreprocessFlags pf;
  auto* preprocess =
      app.add_subcommand("preprocess", "Emit pre-processed training data or (beta, tau, R)");
  AddProblemFlags(preprocess, problem);
  AddCommonFlags(preprocess, common);
  preprocess->add_option("--mode", pf.mode)->check(CLI::IsMember({"data", "channel"}));
  preprocess->add_option("--samples", pf.samples, "CSV of x_label,y_encoding pairs");
  preprocess->add_option("--m", pf.m, "Pairs to sample when no sample file is given");
  preprocess->add_option("--expansion-cap", pf.expansion_cap);
  preprocess->callback([&] { status = RunPreprocess(problem, common, pf); });

  acceptance::Options ao;
  std::vector<int> criteria;
  bool all_passed = true;
  auto* accept = app.add_subcommand("acceptance", "Run the acceptance criteria");
  accept->add_option("--criteria", criteria, "Subset, e.g. 1,6,9")->delimiter(',');
  accept->add_option("--replicas", ao.replicas);
  accept->add_option("--workers", ao.workers);
  accept->add_option("--seed", ao.seed);
  accept->add_flag("--verbose", [&](std::int64_t) { ao.log = &std::cerr; });
  accept->callback([&] {
    ao.criteria = {criteria.begin(), criteria.end()};
    for (const auto& o : acceptance::Run(ao, std::cout)) all_passed = all_passed && o.pass;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }
  if (!status.ok()) {
    std::cerr << "leak: " << status << "\n";
    return ExitCode(status);
  }
  return all_passed ? 0 : 1;
}

}  // namespace
}  // namespace gleak

int main(int argc, char** argv) { return gleak::Main(argc, argv); }
