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

#ifndef RISKCERT_FEASIBILITY_H_
#define RISKCERT_FEASIBILITY_H_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "riskcert/core.h"
#include "riskcert/guarantees.h"
#include "riskcert/percentile.h"
#include "riskcert/rng.h"

namespace riskcert {

// How |U(x, d)| > 0 was decided.
enum class WitnessStatus {
  kWitnessed,       // a sequence passing IsFeasible was found
  kNoWitnessFound,  // the search budget ran out; emptiness is not proven
  kProvenEmpty,     // the problem proved U(x, d) empty
};

std::string_view ToString(WitnessStatus status);
WitnessStatus WitnessStatusFromString(std::string_view name);

struct WitnessResult {
  WitnessStatus status = WitnessStatus::kNoWitnessFound;
  std::optional<InputSequence> witness;
};

// Decides |U(x, d)| > 0: a proof of emptiness if the problem has one, then
// the problem's structured candidate, then rejection sampling with at most
// `budget` attempts.
template <class Env>
WitnessResult FindWitness(const Problem<Env>& problem,
                          const Scenario<Env>& scenario, int budget, Rng& rng) {
  if (problem.ProvablyEmpty(scenario)) {
    return {WitnessStatus::kProvenEmpty, std::nullopt};
  }
  if (auto candidate = problem.CandidateWitness(scenario);
      candidate && problem.IsFeasible(*candidate, scenario)) {
    return {WitnessStatus::kWitnessed, std::move(candidate)};
  }
  if (auto draw = problem.SampleFeasible(scenario, rng, budget)) {
    return {WitnessStatus::kWitnessed, std::move(draw)};
  }
  return {WitnessStatus::kNoWitnessFound, std::nullopt};
}

template <class Env>
struct FeasibilityRecord {
  Scenario<Env> scenario;
  WitnessStatus now_status = WitnessStatus::kNoWitnessFound;
  WitnessStatus next_status = WitnessStatus::kNoWitnessFound;
  std::optional<InputSequence> witness_now;
  std::optional<InputSequence> witness_next;
  std::optional<SystemState> successor;
  // The controller could not produce an input although U(x, d) is nonempty.
  bool controller_failed = false;
  int cost_c = 0;

  bool feasible_now() const { return now_status == WitnessStatus::kWitnessed; }
  bool feasible_next() const {
    return next_status == WitnessStatus::kWitnessed;
  }
  // The implication |U(x,d)| > 0 => |U(x+,d)| > 0 holds trivially.
  bool vacuous() const { return !feasible_now(); }
  bool ambiguous() const {
    return now_status == WitnessStatus::kNoWitnessFound ||
           (feasible_now() && next_status == WitnessStatus::kNoWitnessFound) ||
           controller_failed;
  }
  bool counterexample() const { return !vacuous() && cost_c == 0; }
};

struct FeasibilityConfig {
  // The closed-loop controller U: a percentile solve with these settings.
  PercentileConfig controller;
  int witness_budget = kDefaultRejectionBudget;
  // Scenario-level parallelism.
  int workers = 1;
};

template <class Env>
struct FeasibilityCampaign {
  // Issued only with no counterexample and no ambiguous record.
  bool certified = false;
  // Threshold is the sampled minimum of C over non-vacuous records.
  ConfidenceBound bound;
  std::vector<FeasibilityRecord<Env>> records;
  std::int64_t n_vacuous = 0;
  std::int64_t n_ambiguous = 0;
  std::int64_t n_counterexamples = 0;
};

// Evaluates C(x, d) at one scenario. The successor uses the same d.
template <class Env>
FeasibilityRecord<Env> CheckSuccessive(const Problem<Env>& problem,
                                       const Scenario<Env>& scenario,
                                       const FeasibilityConfig& config,
                                       const Rng& rng) {
  if (config.witness_budget < 1) {
    throw std::invalid_argument("witness budget must be >= 1");
  }
  FeasibilityRecord<Env> record;
  record.scenario = scenario;
  Rng now_rng = rng.Split(0);
  WitnessResult now = FindWitness(problem, scenario, config.witness_budget,
                                  now_rng);
  record.now_status = now.status;
  record.witness_now = std::move(now.witness);
  if (!record.feasible_now()) return record;

  try {
    const PercentileSolution plan =
        SolvePercentile(problem, scenario, config.controller, rng.Split(1));
    record.successor = problem.StepClosedLoop(scenario, plan.sequence);
  } catch (const InfeasibleProblemError&) {
    record.controller_failed = true;
  } catch (const SampleBudgetError&) {
    record.controller_failed = true;
  }
  if (!record.successor) return record;

  const Scenario<Env> next{*record.successor, scenario.env};
  Rng next_rng = rng.Split(2);
  WitnessResult later = FindWitness(problem, next, config.witness_budget,
                                    next_rng);
  record.next_status = later.status;
  record.witness_next = std::move(later.witness);
  record.cost_c = record.feasible_now() && record.feasible_next() ? 1 : 0;
  return record;
}

// Samples n scenarios i.i.d. from X x D (scenario i from rng.Split(i)) and
// certifies successive feasibility when every non-vacuous record has C = 1.
template <class Env>
FeasibilityCampaign<Env> RunFeasibilityCampaign(const Problem<Env>& problem,
                                                std::int64_t n, double epsilon,
                                                const Rng& rng,
                                                const FeasibilityConfig& config) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw std::invalid_argument("epsilon must lie in [0, 1]");
  }
  config.controller.Validate();
  const auto count = static_cast<std::size_t>(n);
  std::vector<std::optional<FeasibilityRecord<Env>>> slots(count);
  ParallelFor(count, config.workers, [&](std::size_t i) {
    const Rng stream = rng.Split(i);
    Rng scenario_rng = stream.Split(0);
    const Scenario<Env> scenario = problem.SampleScenario(scenario_rng);
    slots[i] = CheckSuccessive(problem, scenario, config, stream.Split(1));
  });

  FeasibilityCampaign<Env> campaign;
  campaign.records.reserve(count);
  int min_cost = 1;
  for (auto& slot : slots) {
    FeasibilityRecord<Env>& r = campaign.records.emplace_back(*std::move(slot));
    if (r.vacuous()) ++campaign.n_vacuous;
    if (r.ambiguous()) ++campaign.n_ambiguous;
    if (r.counterexample()) {
      ++campaign.n_counterexamples;
      min_cost = 0;
    }
  }
  campaign.certified =
      campaign.n_counterexamples == 0 && campaign.n_ambiguous == 0;
  campaign.bound = ConfidenceBound{
      .epsilon = epsilon,
      .n_samples = n,
      .confidence = Confidence(epsilon, n),
      .kind = CertificateKind::kSuccessiveFeasibility,
      .threshold = static_cast<double>(min_cost),
  };
  return campaign;
}

}  // namespace riskcert

#endif  // RISKCERT_FEASIBILITY_H_
