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

#ifndef RISKCERT_ENV_UNICYCLE_H_
#define RISKCERT_ENV_UNICYCLE_H_

#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "json.hpp"
#include "riskcert/core.h"
#include "riskcert/rng.h"

namespace riskcert {

// Two-robot reach-avoid on a 3.2 m x 2.4 m arena split into an 8 x 5 grid.
// The ego robot picks a waypoint in an annulus around itself; a Lyapunov
// controller drives it there. The NMPC-B cost is the grid shortest-path
// length from the waypoint to the nearest goal, or 100 when the waypoint is
// blocked or the 5-step predicted rollout violates the barrier.
namespace unicycle {

inline constexpr double kDt = 0.033;
inline constexpr double kMaxSpeed = 0.2;
inline constexpr double kMaxTurnRate = std::numbers::pi / 2.0;
inline constexpr double kXMin = -1.6;
inline constexpr double kXMax = 1.6;
inline constexpr double kYMin = -1.2;
inline constexpr double kYMax = 1.2;
inline constexpr int kGridCols = 8;
inline constexpr int kGridRows = 5;
inline constexpr double kCellWidth = (kXMax - kXMin) / kGridCols;   // 0.4
inline constexpr double kCellHeight = (kYMax - kYMin) / kGridRows;  // 0.48
inline constexpr int kNumObstacles = 8;
inline constexpr int kNumGoals = 3;
inline constexpr double kSafeDistance = 0.18;
inline constexpr double kObstacleBarrier = -5.0;
inline constexpr double kInfeasibleCost = 100.0;
inline constexpr double kAnnulusInner = 0.05;
inline constexpr double kAnnulusOuter = 0.2;
inline constexpr int kPredictionSteps = 5;
inline constexpr double kMinAgentSeparation = 0.3;

}  // namespace unicycle

struct UnicycleState {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;  // wrapped to [0, 2 pi)

  Eigen::Vector2d position() const { return {x, y}; }
  SystemState ToSystemState() const;
  static UnicycleState FromSystemState(const SystemState& s);
  bool operator==(const UnicycleState&) const = default;
};

struct UnicycleInput {
  double v = 0.0;
  double omega = 0.0;
};

struct Cell {
  int i = 0;  // column, along x
  int j = 0;  // row, along y
  bool operator==(const Cell&) const = default;
};

struct GridWorld {
  std::vector<Cell> obstacle_cells;
  std::vector<Cell> goal_cells;
  UnicycleState uncontrolled_state;
  Cell uncontrolled_goal;

  bool IsObstacle(Cell c) const;
  bool IsGoal(Cell c) const;
};

struct UnicycleConfig {
  double k_v = 2.0;
  double k_omega = 4.0;
  int scenario_budget = 10000;

  void Validate() const;
};

double WrapAngle(double theta);     // to [0, 2 pi)
double WrapToPi(double angle);      // to (-pi, pi]

Cell CellOf(const Eigen::Vector2d& p);
Eigen::Vector2d CellCenter(Cell c);
bool InArena(const Eigen::Vector2d& p);

// One Euler step of the unicycle model; position clamped to the arena.
// Throws std::invalid_argument if u lies outside the input box.
UnicycleState UnicycleStep(const UnicycleState& state, const UnicycleInput& u);

// Polar-coordinate Lyapunov law toward w: v = sat(k_v rho cos(alpha)),
// omega = sat(k_omega alpha).
UnicycleInput LyapunovController(const UnicycleState& state,
                                 const Eigen::Vector2d& w,
                                 const UnicycleConfig& config = {});

double BarrierH(const UnicycleState& ego, const UnicycleState& other,
                const GridWorld& world);

// Grid distance from a cell to the nearest goal through free cells.
struct GridPath {
  int transitions = -1;   // -1 when unreachable
  double length = 0.0;    // meters, per-axis cell pitch
};

// Breadth-first search over 4-connected free cells. Among goals reachable
// with the fewest transitions, the smallest metric length is reported.
GridPath ShortestGridPath(Cell from, const GridWorld& world);

// S(w): metric shortest-path length to the nearest goal, 100 when w's cell
// is an obstacle or no goal is reachable.
double ShortestPathCost(const Eigen::Vector2d& w, const GridWorld& world);

// NMPC-B cost: rolls the ego 5 steps toward w with the other agent frozen;
// S(w) if the barrier stays nonnegative at every step, else 100.
double NmpcBCost(const Eigen::Vector2d& w, const UnicycleState& state,
                 const GridWorld& world, const UnicycleConfig& config = {});

// Uniform draw from {w in arena : 0.05 <= |w - p| <= 0.2} by rejection from
// the bounding square clipped to the arena.
std::optional<Eigen::Vector2d> NmpcBSampleFeasible(const UnicycleState& state,
                                                   Rng& rng, int budget);

bool NmpcBIsFeasible(const Eigen::Vector2d& w, const UnicycleState& state);

// Steers the uncontrolled agent one step toward its goal cell center.
// Applied between closed-loop steps, never inside the NMPC-B prediction.
UnicycleState UncontrolledAgentStep(const UnicycleState& state,
                                    const GridWorld& world,
                                    const UnicycleConfig& config = {});

// Invariant checks. Empty string when valid, else a description.
std::string ValidateGridWorld(const GridWorld& world);
std::string ValidateUnicycleScenario(const UnicycleState& ego,
                                     const GridWorld& world);

class UnicycleProblem final : public Problem<GridWorld> {
 public:
  // With `fixed_world`, scenarios only resample the ego state.
  explicit UnicycleProblem(UnicycleConfig config = {},
                           std::optional<GridWorld> fixed_world = {});

  const UnicycleConfig& config() const { return config_; }
  const std::optional<GridWorld>& fixed_world() const { return fixed_world_; }

  // Waypoints are 1-step sequences of dimension 2.
  std::optional<InputSequence> SampleFeasible(const ScenarioType& scenario,
                                              Rng& rng,
                                              int budget) const override;
  double Cost(const InputSequence& sequence,
              const ScenarioType& scenario) const override;
  bool IsFeasible(const InputSequence& sequence,
                  const ScenarioType& scenario) const override;
  // One Lyapunov step toward the planned waypoint.
  SystemState StepClosedLoop(const ScenarioType& scenario,
                             const InputSequence& plan) const override;
  ScenarioType SampleScenario(Rng& rng) const override;
  std::optional<InputSequence> CandidateWitness(
      const ScenarioType& scenario) const override;

 private:
  UnicycleConfig config_;
  std::optional<GridWorld> fixed_world_;
};

InputSequence WaypointSequence(const Eigen::Vector2d& w);

void to_json(nlohmann::ordered_json& j, const Cell& c);
void from_json(const nlohmann::ordered_json& j, Cell& c);
void to_json(nlohmann::ordered_json& j, const UnicycleState& s);
void from_json(const nlohmann::ordered_json& j, UnicycleState& s);
void to_json(nlohmann::ordered_json& j, const GridWorld& world);
void from_json(const nlohmann::ordered_json& j, GridWorld& world);
void to_json(nlohmann::ordered_json& j, const UnicycleConfig& config);

// GridWorld file schema:
//   {"obstacle_cells": [[i, j], ...], "goal_cells": [[i, j], ...],
//    "uncontrolled": {"state": [x, y, theta], "goal_cell": [i, j]},
//    "ego_state": [x, y, theta]}
struct GridWorldFile {
  GridWorld world;
  std::optional<UnicycleState> ego_state;
};
GridWorldFile ParseGridWorldFile(const nlohmann::ordered_json& j);
GridWorldFile LoadGridWorldFile(const std::string& path);
nlohmann::ordered_json GridWorldFileToJson(const GridWorldFile& file);

}  // namespace riskcert

#endif  // RISKCERT_ENV_UNICYCLE_H_
