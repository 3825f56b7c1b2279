// Copyright 2026 The riskcert Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "riskcert/core.h"
#include "riskcert/env_planar.h"
#include "riskcert/env_unicycle.h"
#include "riskcert/feasibility.h"
#include "riskcert/guarantees.h"
#include "riskcert/json_util.h"
#include "riskcert/percentile.h"
#include "riskcert/report.h"
#include "riskcert/rng.h"
#include "riskcert/runtime_profiler.h"
#include "riskcert/selftest.h"

namespace riskcert::cli {
namespace {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Command { kPlan, kFeasibility, kRuntime };

struct Options {
  std::string env = "planar";
  std::int64_t n = 0;           // 0 selects the environment default
  double epsilon = -1.0;        // negative selects the environment default
  bool refine = false;
  std::int64_t validate_n = 0;
  std::int64_t warmup = 5;
  std::int64_t controller_n = 0;
  double controller_epsilon = -1.0;
  int witness_budget = kDefaultRejectionBudget;
  int draw_budget = kDefaultRejectionBudget;
  std::string out;
  std::string histogram;
  int bins = 30;
  bool strict_timing = true;
  int workers = 1;
};

// Problem bound to a concrete environment type, plus what the report needs to
// describe it.
template <class Env>
struct Binding {
  std::unique_ptr<Problem<Env>> problem;
  std::optional<SystemState> start;
  Json description;
  std::int64_t default_n = 0;
  double default_epsilon = 0.0;
};

struct Defaults {
  std::int64_t n;
  double epsilon;
};

// Sample sizes used by the experiments each environment reproduces.
Defaults PlanarDefaults() { return {1000, 0.01}; }
Defaults UnicycleDefaults() { return {100, 0.05}; }

std::uint64_t ParseSeed(const std::string& text, const char* what) {
  std::uint64_t value = 0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw ConfigError(std::string("invalid ") + what + ": '" + text + "'");
  }
  return value;
}

std::uint64_t ResolveSeed(const std::optional<std::string>& flag) {
  if (flag) return ParseSeed(*flag, "--seed");
  if (const char* env = std::getenv("RISKCERT_SEED")) {
    return ParseSeed(env, "RISKCERT_SEED");
  }
  return 0;
}

Binding<PlanarEnvironment> PlanarBinding(const std::string& source,
                                         const std::optional<PlanarEnvFile>& file) {
  Binding<PlanarEnvironment> b;
  PlanarConfig config;
  std::optional<PlanarEnvironment> fixed;
  if (file) {
    config = file->config;
    fixed = file->env;
    if (file->start) b.start = SystemState{*file->start};
  }
  b.problem = std::make_unique<PlanarProblem>(config, fixed);
  b.description["kind"] = "planar";
  b.description["source"] = source;
  b.description["config"] = config;
  b.description["fixed_env"] = fixed ? Json(*fixed) : Json(nullptr);
  b.description["start"] = b.start ? Json(*b.start) : Json(nullptr);
  b.default_n = PlanarDefaults().n;
  b.default_epsilon = PlanarDefaults().epsilon;
  return b;
}

Binding<GridWorld> UnicycleBinding(const std::string& source,
                                   const std::optional<GridWorldFile>& file) {
  Binding<GridWorld> b;
  UnicycleConfig config;
  std::optional<GridWorld> fixed;
  if (file) {
    fixed = file->world;
    if (file->ego_state) b.start = file->ego_state->ToSystemState();
  }
  b.problem = std::make_unique<UnicycleProblem>(config, fixed);
  b.description["kind"] = "unicycle";
  b.description["source"] = source;
  b.description["config"] = config;
  b.description["fixed_env"] = fixed ? Json(*fixed) : Json(nullptr);
  b.description["start"] = b.start ? Json(*b.start) : Json(nullptr);
  b.default_n = UnicycleDefaults().n;
  b.default_epsilon = UnicycleDefaults().epsilon;
  return b;
}

// Calls `fn` with the Binding selected by --env.
template <class Fn>
int WithEnvironment(const std::string& env, Fn&& fn) {
  if (env == "planar") return fn(PlanarBinding(env, std::nullopt));
  if (env == "unicycle") return fn(UnicycleBinding(env, std::nullopt));
  if (!std::filesystem::is_regular_file(env)) {
    throw ConfigError("--env must be 'planar', 'unicycle' or an existing "
                      "environment file: '" + env + "'");
  }
  Json j;
  try {
    j = ReadJsonFile(env);
  } catch (const std::exception& e) {
    throw ConfigError("cannot parse environment file '" + env + "': " +
                      e.what());
  }
  if (j.is_object() && j.contains("obstacle_cells")) {
    std::optional<GridWorldFile> file;
    try {
      file = ParseGridWorldFile(j);
    } catch (const std::exception& e) {
      throw ConfigError("invalid grid world file '" + env + "': " + e.what());
    }
    return fn(UnicycleBinding(env, file));
  }
  if (j.is_object() && j.contains("obstacles")) {
    std::optional<PlanarEnvFile> file;
    try {
      file = ParsePlanarEnvFile(j);
    } catch (const std::exception& e) {
      throw ConfigError("invalid planar environment file '" + env + "': " +
                        e.what());
    }
    return fn(PlanarBinding(env, file));
  }
  throw ConfigError("environment file '" + env +
                    "' has neither 'obstacles' nor 'obstacle_cells'");
}

template <class Env>
Scenario<Env> PlanningScenario(const Binding<Env>& b, std::uint64_t seed) {
  Rng rng = Rng(seed, kCampaignStream).Split(0);
  Scenario<Env> scenario = b.problem->SampleScenario(rng);
  if (b.start) scenario.state = *b.start;
  return scenario;
}

Json RefineConfigJson(const RefineConfig& c) {
  Json j;
  j["initial_step"] = c.initial_step;
  j["max_iters"] = c.max_iters;
  j["max_backtracks"] = c.max_backtracks;
  j["tol"] = c.tol;
  return j;
}

Json ControllerJson(const PercentileConfig& c) {
  Json j;
  j["n"] = c.n;
  j["epsilon"] = c.epsilon;
  j["refine"] = c.refine;
  j["refine_config"] = RefineConfigJson(c.refine_config);
  j["draw_budget"] = c.draw_budget;
  return j;
}

void WriteOutputs(const CampaignReport& report, const Options& o,
                  const std::vector<double>& histogram_values,
                  std::optional<double> threshold, std::ostream& out,
                  std::ostream& err) {
  WriteReport(report, o.out);
  if (!o.histogram.empty()) {
    if (histogram_values.empty()) {
      err << "riskcert: no values for a histogram; skipped\n";
    } else {
      EmitHistogram(histogram_values, o.bins, threshold, o.histogram);
    }
  }
  out << o.out << "\n";
}

template <class Env>
int RunPlan(const Binding<Env>& b, const Options& o, std::uint64_t seed,
            std::ostream& out, std::ostream& err) {
  PercentileConfig controller;
  controller.n = o.n > 0 ? o.n : b.default_n;
  controller.epsilon = o.epsilon >= 0.0 ? o.epsilon : b.default_epsilon;
  controller.refine = o.refine;
  controller.draw_budget = o.draw_budget;
  controller.workers = o.workers;

  const Scenario<Env> scenario = PlanningScenario(b, seed);
  PercentileSolution solution;
  try {
    solution = SolvePercentile(*b.problem, scenario, controller,
                               Rng(seed, kCampaignStream).Split(1));
  } catch (const InfeasibleProblemError& e) {
    err << "riskcert: infeasible problem: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const SampleBudgetError& e) {
    err << "riskcert: sample budget exhausted: " << e.what() << "\n";
    return kExitInfeasible;
  }

  CampaignReport report;
  report.kind = "percentile";
  report.seed = seed;
  report.config["command"] = "plan";
  report.config["env"] = b.description;
  report.config["controller"] = ControllerJson(controller);
  report.config["validate_n"] = o.validate_n;
  report.certified = true;
  report.bound = solution.bound;
  report.summary = SolutionToJson(solution);
  report.summary["scenario"] = ScenarioToJson(scenario);
  for (std::size_t i = 0; i < solution.sampled_costs.size(); ++i) {
    Json r;
    r["draw"] = i;
    r["cost"] = solution.sampled_costs[i];
    report.records.push_back(std::move(r));
  }

  std::vector<double> histogram_values = solution.sampled_costs;
  if (o.validate_n > 0) {
    std::vector<double> costs;
    double fraction = 0.0;
    try {
      fraction = StrictlyCheaperFraction(*b.problem, scenario, solution.cost,
                                         o.validate_n, Rng(seed, kValidationStream),
                                         o.draw_budget, &costs);
    } catch (const SampleBudgetError& e) {
      err << "riskcert: validation draw failed: " << e.what() << "\n";
      return kExitInfeasible;
    }
    report.validation = ValidationSummary{o.validate_n, fraction};
    histogram_values = std::move(costs);
  }
  WriteOutputs(report, o, histogram_values, solution.cost, out, err);
  out << "plan: cost=" << solution.cost << " epsilon=" << controller.epsilon
      << " n=" << controller.n << " confidence=" << solution.bound.confidence;
  if (report.validation) {
    out << " strictly_cheaper=" << report.validation->fraction_beyond_threshold;
  }
  out << "\n";
  return kExitOk;
}

template <class Env>
PercentileConfig CampaignController(const Binding<Env>& b, const Options& o) {
  PercentileConfig c;
  c.n = o.controller_n > 0 ? o.controller_n : b.default_n;
  c.epsilon =
      o.controller_epsilon >= 0.0 ? o.controller_epsilon : b.default_epsilon;
  c.refine = o.refine;
  c.draw_budget = o.draw_budget;
  c.workers = 1;
  return c;
}

template <class Env>
int RunFeasibility(const Binding<Env>& b, const Options& o, std::uint64_t seed,
                   std::ostream& out, std::ostream& err) {
  FeasibilityConfig config;
  config.controller = CampaignController(b, o);
  config.witness_budget = o.witness_budget;
  config.workers = o.workers;
  const std::int64_t n = o.n > 0 ? o.n : b.default_n;
  const double epsilon = o.epsilon >= 0.0 ? o.epsilon : b.default_epsilon;

  const FeasibilityCampaign<Env> campaign = RunFeasibilityCampaign(
      *b.problem, n, epsilon, Rng(seed, kCampaignStream), config);

  CampaignReport report;
  report.kind = "feasibility";
  report.seed = seed;
  report.config["command"] = "verify-feasibility";
  report.config["env"] = b.description;
  report.config["n"] = n;
  report.config["epsilon"] = epsilon;
  report.config["controller"] = ControllerJson(config.controller);
  report.config["witness_budget"] = config.witness_budget;
  report.config["validate_n"] = o.validate_n;
  report.certified = campaign.certified;
  if (campaign.certified) report.bound = campaign.bound;
  report.summary["n_vacuous"] = campaign.n_vacuous;
  report.summary["n_ambiguous"] = campaign.n_ambiguous;
  report.summary["n_counterexamples"] = campaign.n_counterexamples;

  std::vector<double> c_values;
  Json counterexamples = Json::array();
  for (const auto& r : campaign.records) {
    report.records.push_back(RecordToJson(r));
    if (!r.vacuous()) c_values.push_back(r.cost_c);
    if (r.counterexample() || r.ambiguous()) {
      counterexamples.push_back(ScenarioToJson(r.scenario));
    }
  }
  report.summary["counterexamples"] = std::move(counterexamples);

  std::int64_t validation_failures = 0;
  if (o.validate_n > 0) {
    const FeasibilityCampaign<Env> check = RunFeasibilityCampaign(
        *b.problem, o.validate_n, epsilon, Rng(seed, kValidationStream), config);
    validation_failures = check.n_counterexamples + check.n_ambiguous;
    Json failed = Json::array();
    for (const auto& r : check.records) {
      if (r.counterexample() || r.ambiguous()) {
        failed.push_back(RecordToJson(r));
      }
    }
    report.summary["validation_n_vacuous"] = check.n_vacuous;
    report.summary["validation_counterexamples"] = std::move(failed);
    report.validation = ValidationSummary{
        o.validate_n,
        static_cast<double>(validation_failures) /
            static_cast<double>(o.validate_n)};
  }
  const std::optional<double> threshold =
      campaign.certified ? std::optional<double>(campaign.bound.threshold)
                         : std::nullopt;
  WriteOutputs(report, o, c_values, threshold, out, err);
  out << "verify-feasibility: certified=" << (campaign.certified ? "yes" : "no")
      << " n=" << n << " epsilon=" << epsilon
      << " counterexamples=" << campaign.n_counterexamples
      << " ambiguous=" << campaign.n_ambiguous
      << " vacuous=" << campaign.n_vacuous;
  if (report.validation) {
    out << " validation_failures=" << validation_failures;
  }
  out << "\n";
  if (!campaign.certified || validation_failures > 0) {
    err << "riskcert: successive feasibility certificate refused\n";
    return kExitCounterexample;
  }
  return kExitOk;
}

template <class Env>
int RunRuntime(const Binding<Env>& b, const Options& o, std::uint64_t seed,
               std::ostream& out, std::ostream& err) {
  RuntimeConfig config;
  config.controller = CampaignController(b, o);
  config.warmup_count = o.warmup;
  config.strict_timing = o.strict_timing;
  config.workers = o.workers;
  const std::int64_t n = o.n > 0 ? o.n : b.default_n;
  const double epsilon = o.epsilon >= 0.0 ? o.epsilon : b.default_epsilon;

  const RuntimeCampaign<Env> campaign = RunRuntimeCampaign(
      *b.problem, n, epsilon, Rng(seed, kCampaignStream), config);

  CampaignReport report;
  report.kind = "runtime";
  report.seed = seed;
  report.config["command"] = "verify-runtime";
  report.config["env"] = b.description;
  report.config["n"] = n;
  report.config["epsilon"] = epsilon;
  report.config["controller"] = ControllerJson(config.controller);
  report.config["warmup"] = config.warmup_count;
  report.config["strict_timing"] = config.strict_timing;
  report.config["validate_n"] = o.validate_n;
  report.certified = true;
  report.bound = campaign.bound;

  std::vector<double> timed;
  std::int64_t n_infeasible = 0;
  for (const auto& r : campaign.records) {
    report.records.push_back(RecordToJson(r));
    if (r.warmup) continue;
    timed.push_back(r.wall_seconds);
    if (r.infeasible) ++n_infeasible;
  }
  std::vector<double> sorted = timed;
  std::sort(sorted.begin(), sorted.end());
  report.summary["threshold"] = campaign.bound.threshold;
  report.summary["median_seconds"] = sorted[sorted.size() / 2];
  report.summary["n_infeasible"] = n_infeasible;

  std::vector<double> histogram_values = timed;
  if (o.validate_n > 0) {
    std::vector<double> runtimes = MeasureRuntimes(
        *b.problem, o.validate_n, Rng(seed, kValidationStream), config);
    report.validation = ValidationSummary{
        o.validate_n, FractionAbove(runtimes, campaign.bound.threshold)};
    histogram_values = std::move(runtimes);
  }
  WriteOutputs(report, o, histogram_values, campaign.bound.threshold, out, err);
  out << "verify-runtime: threshold_seconds=" << campaign.bound.threshold
      << " n=" << n << " epsilon=" << epsilon
      << " confidence=" << campaign.bound.confidence;
  if (report.validation) {
    out << " fraction_above=" << report.validation->fraction_beyond_threshold;
  }
  out << "\n";
  return kExitOk;
}

void ValidateOptions(const Options& o) {
  if (o.epsilon >= 0.0 && !(o.epsilon <= 1.0)) {
    throw ConfigError("--epsilon must lie in [0, 1]");
  }
  if (o.controller_epsilon >= 0.0 && !(o.controller_epsilon <= 1.0)) {
    throw ConfigError("--controller-epsilon must lie in [0, 1]");
  }
  if (o.validate_n < 0) throw ConfigError("--validate-n must be >= 0");
  if (o.warmup < 0) throw ConfigError("--warmup must be >= 0");
  if (o.witness_budget < 1) throw ConfigError("--witness-budget must be >= 1");
  if (o.draw_budget < 1) throw ConfigError("--draw-budget must be >= 1");
  if (o.bins < 1) throw ConfigError("--bins must be >= 1");
  if (o.workers < 1) throw ConfigError("--workers must be >= 1");
  if (o.out.empty()) throw ConfigError("--out must not be empty");
}

// Shared by the three campaign subcommands.
void AddCampaignOptions(CLI::App* sub, Options& o, bool* n_given) {
  sub->add_option("--env", o.env,
                  "planar, unicycle, or a path to an environment JSON file")
      ->capture_default_str();
  sub->add_option_function<std::int64_t>(
         "--n",
         [&o, n_given](const std::int64_t& v) {
           o.n = v;
           *n_given = true;
         },
         "Number of samples (default: 1000 planar, 100 unicycle)");
  sub->add_option("--epsilon", o.epsilon,
                  "Violation level in [0, 1] (default: 0.01 planar, 0.05 "
                  "unicycle)");
  sub->add_flag("--refine", o.refine,
                "Refine the best sample by projected subgradient descent");
  sub->add_option("--validate-n", o.validate_n,
                  "Independent validation samples drawn after the campaign")
      ->capture_default_str();
  sub->add_option("--draw-budget", o.draw_budget,
                  "Rejection attempts allowed per feasible draw")
      ->capture_default_str();
  sub->add_option("--histogram", o.histogram,
                  "Write a histogram CSV of the validation values here");
  sub->add_option("--bins", o.bins, "Histogram bins")->capture_default_str();
}

void AddControllerOptions(CLI::App* sub, Options& o) {
  sub->add_option("--controller-n", o.controller_n,
                  "Samples per controller query (default as --n of plan)");
  sub->add_option("--controller-epsilon", o.controller_epsilon,
                  "Controller violation level (default as --epsilon of plan)");
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Sample-based probabilistic certificates for black-box "
               "controllers",
               "riskcert"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  Options o;
  std::optional<std::string> seed_text;
  bool n_given = false;
  app.add_option_function<std::string>(
      "--seed", [&seed_text](const std::string& s) { seed_text = s; },
      "Random seed (falls back to RISKCERT_SEED, then 0)");
  app.add_option("--out", o.out, "Report path");
  app.add_flag("--strict-timing,!--no-strict-timing", o.strict_timing,
               "Allow at most one timed solve in flight (default on)");
  app.add_option("--workers", o.workers, "Worker threads")
      ->capture_default_str();
  app.fallthrough();

  CLI::App* plan = app.add_subcommand(
      "plan", "Solve one problem instance with a percentile certificate");
  AddCampaignOptions(plan, o, &n_given);

  CLI::App* feas = app.add_subcommand(
      "verify-feasibility", "Certify successive feasibility over scenarios");
  AddCampaignOptions(feas, o, &n_given);
  AddControllerOptions(feas, o);
  feas->add_option("--witness-budget", o.witness_budget,
                   "Rejection attempts used to decide nonemptiness")
      ->capture_default_str();

  CLI::App* runtime = app.add_subcommand(
      "verify-runtime", "Certify a maximum controller runtime");
  AddCampaignOptions(runtime, o, &n_given);
  AddControllerOptions(runtime, o);
  runtime->add_option("--warmup", o.warmup, "Untimed warmup solves")
      ->capture_default_str();

  CLI::App* selftest = app.add_subcommand(
      "selftest", "Run the brute-force coverage checks");
  int trials = 4000;
  selftest->add_option("--trials", trials, "Coverage trials")
      ->capture_default_str();

  std::vector<std::string> argv_rest(args.begin() + (args.empty() ? 0 : 1),
                                     args.end());
  std::reverse(argv_rest.begin(), argv_rest.end());
  try {
    app.parse(argv_rest);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "riskcert: " << e.what() << "\n";
    return kExitConfigError;
  }

  try {
    const std::uint64_t seed = ResolveSeed(seed_text);
    if (n_given && o.n < 1) throw ConfigError("--n must be >= 1");

    if (selftest->parsed()) {
      if (trials < 1) throw ConfigError("--trials must be >= 1");
      const auto results = RunSelfTests(seed, {}, trials);
      bool all = true;
      Json j = Json::array();
      for (const auto& r : results) {
        out << (r.passed ? "PASS " : "FAIL ") << r.name << " " << r.detail
            << "\n";
        all = all && r.passed;
        Json e;
        e["name"] = r.name;
        e["passed"] = r.passed;
        e["detail"] = r.detail;
        j.push_back(std::move(e));
      }
      if (!o.out.empty()) {
        CampaignReport report;
        report.kind = "selftest";
        report.seed = seed;
        report.config["command"] = "selftest";
        report.config["trials"] = trials;
        report.certified = all;
        report.records = std::move(j);
        WriteReport(report, o.out);
        out << o.out << "\n";
      }
      return all ? kExitOk : kExitCounterexample;
    }

    Command command = Command::kPlan;
    if (feas->parsed()) command = Command::kFeasibility;
    if (runtime->parsed()) command = Command::kRuntime;
    if (o.out.empty()) {
      o.out = command == Command::kPlan          ? "plan_report.json"
              : command == Command::kFeasibility ? "feasibility_report.json"
                                                 : "runtime_report.json";
    }
    ValidateOptions(o);

    return WithEnvironment(o.env, [&](const auto& binding) -> int {
      switch (command) {
        case Command::kPlan:
          return RunPlan(binding, o, seed, out, err);
        case Command::kFeasibility:
          return RunFeasibility(binding, o, seed, out, err);
        case Command::kRuntime:
          return RunRuntime(binding, o, seed, out, err);
      }
      return kExitConfigError;
    });
  } catch (const ConfigError& e) {
    err << "riskcert: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::invalid_argument& e) {
    err << "riskcert: invalid configuration: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const InfeasibleProblemError& e) {
    err << "riskcert: infeasible problem: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const SampleBudgetError& e) {
    err << "riskcert: sample budget exhausted: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::exception& e) {
    err << "riskcert: " << e.what() << "\n";
    return kExitConfigError;
  }
}

}  // namespace riskcert::cli
