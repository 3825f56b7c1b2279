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

#ifndef RISKCERT_ENV_PLANAR_H_
#define RISKCERT_ENV_PLANAR_H_

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "json.hpp"
#include "riskcert/core.h"
#include "riskcert/rng.h"

namespace riskcert {

// Reach-avoid waypoint planning in a rectangle with circular obstacles.
// Inputs are planar position increments bounded in Euclidean norm; the state
// is the position itself.
struct PlanarConfig {
  Eigen::Vector2d box_min{0.0, 0.0};
  Eigen::Vector2d box_max{5.0, 4.0};
  int horizon = 20;
  double step_bound = 0.03;
  double collision_radius = 0.3;
  int n_obstacles = 5;
  Eigen::Vector2d goal{4.5, 2.0};
  double terminal_weight = 10.0;
  // Attempts allowed when drawing an admissible scenario.
  int scenario_budget = 10000;

  // Throws std::invalid_argument on a malformed configuration.
  void Validate() const;
};

struct PlanarEnvironment {
  std::vector<Eigen::Vector2d> obstacles;
  // Constant displacement added by the environment on every step. Zero gives
  // the plain integrator x+ = x + u.
  Eigen::Vector2d drift = Eigen::Vector2d::Zero();
};

// A curated environment loaded from JSON.
struct PlanarEnvFile {
  PlanarConfig config;
  PlanarEnvironment env;
  std::optional<Eigen::Vector2d> start;
};

Eigen::Vector2d PlanarDynamics(const Eigen::Vector2d& x,
                               const Eigen::Vector2d& u,
                               const Eigen::Vector2d& drift =
                                   Eigen::Vector2d::Zero());

// Membership in F(d) intersected with the state box. The obstacle test is
// non-strict: a point exactly r away from an obstacle is free.
bool InFreeSpace(const Eigen::Vector2d& p, const PlanarEnvironment& env,
                 const PlanarConfig& config);

// terminal_weight * |x^H - x_d| + sum_i |x^{i+1} - x^i|.
double PlanarCost(const InputSequence& seq, const Eigen::Vector2d& x,
                  const PlanarEnvironment& env, const PlanarConfig& config);

// Analytic gradient of PlanarCost. Norm kinks contribute zero.
Eigen::VectorXd PlanarCostGradient(const InputSequence& seq,
                                   const Eigen::Vector2d& x,
                                   const PlanarEnvironment& env,
                                   const PlanarConfig& config);

// Every increment within step_bound and every rollout state x^0..x^H free.
bool PlanarIsFeasible(const InputSequence& seq, const Eigen::Vector2d& x,
                      const PlanarEnvironment& env, const PlanarConfig& config);

// Rejection sampler for U(x, d): increments i.i.d. uniform on the disk of
// radius step_bound, the whole sequence rejected on any collision.
std::optional<InputSequence> PlanarSampleFeasible(const Eigen::Vector2d& x,
                                                  const PlanarEnvironment& env,
                                                  const PlanarConfig& config,
                                                  Rng& rng, int budget);

// Fine-grid (cell <= r/4) 4-connected search from start to the goal through
// cells whose centers are free.
bool PlanarPathExists(const Eigen::Vector2d& start,
                      const PlanarEnvironment& env, const PlanarConfig& config);

class PlanarProblem final : public Problem<PlanarEnvironment> {
 public:
  // With `fixed_env`, scenarios only resample the start position.
  explicit PlanarProblem(PlanarConfig config,
                         std::optional<PlanarEnvironment> fixed_env = {});

  const PlanarConfig& config() const { return config_; }
  const std::optional<PlanarEnvironment>& fixed_env() const {
    return fixed_env_;
  }

  std::optional<InputSequence> SampleFeasible(const ScenarioType& scenario,
                                              Rng& rng,
                                              int budget) const override;
  double Cost(const InputSequence& sequence,
              const ScenarioType& scenario) const override;
  bool IsFeasible(const InputSequence& sequence,
                  const ScenarioType& scenario) const override;
  // x+ = x + u^0 + drift.
  SystemState StepClosedLoop(const ScenarioType& scenario,
                             const InputSequence& plan) const override;
  // Throws SampleBudgetError after config.scenario_budget attempts.
  ScenarioType SampleScenario(Rng& rng) const override;
  std::optional<Eigen::VectorXd> CostGradient(
      const InputSequence& sequence,
      const ScenarioType& scenario) const override;
  // Projects each increment onto the step_bound disk.
  void ProjectInputs(InputSequence& sequence) const override;
  // Hold position against the drift as well as the step bound allows.
  std::optional<InputSequence> CandidateWitness(
      const ScenarioType& scenario) const override;
  // Empty when x is not free, or when a drift stronger than the step bound
  // must carry every rollout out of the box within the horizon.
  bool ProvablyEmpty(const ScenarioType& scenario) const override;

 private:
  PlanarConfig config_;
  std::optional<PlanarEnvironment> fixed_env_;
};

inline Eigen::Vector2d Position(const SystemState& s) {
  return Eigen::Vector2d(s.coords[0], s.coords[1]);
}

void to_json(nlohmann::ordered_json& j, const PlanarConfig& config);
void to_json(nlohmann::ordered_json& j, const PlanarEnvironment& env);
void from_json(const nlohmann::ordered_json& j, PlanarEnvironment& env);

// Environment file schema:
//   {"obstacles": [[x, y], ...], "goal": [x, y], "r": 0.3, "H": 20,
//    optional "step_bound", "drift": [dx, dy], "start": [x, y]}
PlanarEnvFile ParsePlanarEnvFile(const nlohmann::ordered_json& j);
PlanarEnvFile LoadPlanarEnvFile(const std::string& path);
nlohmann::ordered_json PlanarEnvFileToJson(const PlanarEnvFile& file);

}  // namespace riskcert

#endif  // RISKCERT_ENV_PLANAR_H_
