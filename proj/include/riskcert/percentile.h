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

#ifndef RISKCERT_PERCENTILE_H_
#define RISKCERT_PERCENTILE_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "riskcert/core.h"
#include "riskcert/guarantees.h"
#include "riskcert/rng.h"

namespace riskcert {

// Projected subgradient descent with backtracking.
struct RefineConfig {
  double initial_step = 0.003;
  int max_iters = 200;
  int max_backtracks = 20;
  double tol = 1e-8;
};

struct PercentileConfig {
  std::int64_t n = 1000;
  double epsilon = 0.01;
  bool refine = false;
  RefineConfig refine_config;
  int draw_budget = kDefaultRejectionBudget;
  // Draws are independent substreams, so this only changes wall time.
  int workers = 1;

  void Validate() const {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
      throw std::invalid_argument("epsilon must lie in [0, 1]");
    }
    if (draw_budget < 1) throw std::invalid_argument("draw budget must be >= 1");
  }
};

struct PercentileSolution {
  // Final sequence: the refined one when refinement ran, else the sampled one.
  InputSequence sequence;
  // Minimum sampled cost; this is what the certificate speaks about.
  double cost = 0.0;
  ConfidenceBound bound;
  std::int64_t n_drawn = 0;
  int refinement_steps = 0;
  double refined_cost = 0.0;
  InputSequence sampled_sequence;
  std::vector<double> sampled_costs;
};

struct RefineResult {
  InputSequence sequence;
  double cost = 0.0;
  int iterations = 0;
};

using RefineObserver =
    std::function<void(const InputSequence& iterate, double cost)>;

// Central finite-difference gradient of the problem cost.
template <class Env>
Eigen::VectorXd FiniteDifferenceGradient(const Problem<Env>& problem,
                                         const InputSequence& sequence,
                                         const Scenario<Env>& scenario,
                                         double h = 1e-6) {
  Eigen::VectorXd grad(sequence.flat().size());
  InputSequence probe = sequence;
  for (Eigen::Index k = 0; k < grad.size(); ++k) {
    const double original = probe.flat()[k];
    probe.flat()[k] = original + h;
    const double up = problem.Cost(probe, scenario);
    probe.flat()[k] = original - h;
    const double down = problem.Cost(probe, scenario);
    probe.flat()[k] = original;
    grad[k] = (up - down) / (2.0 * h);
  }
  return grad;
}

template <class Env>
Eigen::VectorXd Gradient(const Problem<Env>& problem,
                         const InputSequence& sequence,
                         const Scenario<Env>& scenario) {
  if (auto analytic = problem.CostGradient(sequence, scenario)) {
    return *std::move(analytic);
  }
  return FiniteDifferenceGradient(problem, sequence, scenario);
}

// Descends from a feasible start without ever accepting an infeasible or
// cost-increasing iterate. Steps that leave U(x, d) are backtracked rather
// than projected, since the state constraints are nonconvex.
template <class Env>
RefineResult Refine(const Problem<Env>& problem, const Scenario<Env>& scenario,
                    const InputSequence& start, const RefineConfig& config,
                    const RefineObserver& observer = {}) {
  RefineResult result{start, problem.Cost(start, scenario), 0};
  for (int iter = 0; iter < config.max_iters; ++iter) {
    const Eigen::VectorXd grad = Gradient(problem, result.sequence, scenario);
    if (!grad.allFinite() || grad.squaredNorm() == 0.0) break;

    double step = config.initial_step;
    std::optional<RefineResult> accepted;
    for (int b = 0; b <= config.max_backtracks; ++b, step *= 0.5) {
      InputSequence candidate = result.sequence;
      candidate.flat() -= step * grad;
      problem.ProjectInputs(candidate);
      if (!problem.IsFeasible(candidate, scenario)) continue;
      const double c = problem.Cost(candidate, scenario);
      if (c < result.cost) {
        accepted = RefineResult{std::move(candidate), c, iter + 1};
        break;
      }
    }
    if (!accepted) break;

    const double decrease = result.cost - accepted->cost;
    result = *std::move(accepted);
    if (observer) observer(result.sequence, result.cost);
    if (decrease < config.tol) break;
  }
  return result;
}

// Best of exactly config.n uniform draws from U(x, d), certified with
// CertifyMin over those n costs, then optionally refined.
//
// Draw i uses rng.Split(i). Throws InfeasibleProblemError when the first
// draw exhausts its budget and SampleBudgetError when a later one does.
template <class Env>
PercentileSolution SolvePercentile(const Problem<Env>& problem,
                                   const Scenario<Env>& scenario,
                                   const PercentileConfig& config,
                                   const Rng& rng) {
  config.Validate();
  const auto n = static_cast<std::size_t>(config.n);
  std::vector<std::optional<InputSequence>> draws(n);
  std::vector<double> costs(n, 0.0);
  ParallelFor(n, config.workers, [&](std::size_t i) {
    Rng stream = rng.Split(i);
    draws[i] = problem.SampleFeasible(scenario, stream, config.draw_budget);
    if (draws[i]) costs[i] = problem.Cost(*draws[i], scenario);
  });

  for (std::size_t i = 0; i < n; ++i) {
    if (draws[i]) continue;
    if (i == 0) {
      throw InfeasibleProblemError(
          "no feasible input sequence found within the rejection budget");
    }
    throw SampleBudgetError("rejection budget exhausted after " +
                            std::to_string(i) + " feasible draws");
  }

  const auto best = static_cast<std::size_t>(
      std::min_element(costs.begin(), costs.end()) - costs.begin());
  PercentileSolution solution;
  solution.sampled_sequence = *draws[best];
  solution.cost = costs[best];
  solution.bound = CertifyMin(costs, config.epsilon);
  solution.n_drawn = config.n;
  solution.sampled_costs = std::move(costs);
  solution.sequence = solution.sampled_sequence;
  solution.refined_cost = solution.cost;
  if (config.refine) {
    RefineResult refined = Refine(problem, scenario, solution.sampled_sequence,
                                  config.refine_config);
    solution.sequence = std::move(refined.sequence);
    solution.refined_cost = refined.cost;
    solution.refinement_steps = refined.iterations;
  }
  return solution;
}

// Fraction of `n_validation` fresh uniform draws from U(x, d) whose cost is
// strictly below `threshold`: an estimate of V(F(u)) for a solution of that
// cost. Also returns the validation costs when `costs_out` is non-null.
template <class Env>
double StrictlyCheaperFraction(const Problem<Env>& problem,
                               const Scenario<Env>& scenario, double threshold,
                               std::int64_t n_validation, const Rng& rng,
                               int draw_budget = kDefaultRejectionBudget,
                               std::vector<double>* costs_out = nullptr) {
  if (n_validation < 1) throw std::invalid_argument("n_validation must be >= 1");
  std::int64_t cheaper = 0;
  if (costs_out) costs_out->clear();
  for (std::int64_t i = 0; i < n_validation; ++i) {
    Rng stream = rng.Split(static_cast<std::uint64_t>(i));
    auto draw = problem.SampleFeasible(scenario, stream, draw_budget);
    if (!draw) throw SampleBudgetError("validation draw exhausted its budget");
    const double c = problem.Cost(*draw, scenario);
    if (c < threshold) ++cheaper;
    if (costs_out) costs_out->push_back(c);
  }
  return static_cast<double>(cheaper) / static_cast<double>(n_validation);
}

}  // namespace riskcert

#endif  // RISKCERT_PERCENTILE_H_
