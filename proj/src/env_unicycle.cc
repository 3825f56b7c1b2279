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

#include "riskcert/env_unicycle.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <stdexcept>

#include "riskcert/json_util.h"

namespace riskcert {
namespace {

using namespace unicycle;

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kInputSlack = 1e-12;
constexpr int kNumCells = kGridCols * kGridRows;

int Index(Cell c) { return c.j * kGridCols + c.i; }
Cell CellAt(int idx) { return {idx % kGridCols, idx / kGridCols}; }
bool InGrid(Cell c) {
  return c.i >= 0 && c.i < kGridCols && c.j >= 0 && c.j < kGridRows;
}

bool Contains(const std::vector<Cell>& cells, Cell c) {
  return std::find(cells.begin(), cells.end(), c) != cells.end();
}

bool Distinct(const std::vector<Cell>& cells) {
  for (std::size_t a = 0; a < cells.size(); ++a) {
    for (std::size_t b = a + 1; b < cells.size(); ++b) {
      if (cells[a] == cells[b]) return false;
    }
  }
  return true;
}

UnicycleState UniformState(Rng& rng) {
  UnicycleState s;
  s.x = rng.Uniform(kXMin, kXMax);
  s.y = rng.Uniform(kYMin, kYMax);
  s.theta = rng.Uniform(0.0, kTwoPi);
  return s;
}

}  // namespace

SystemState UnicycleState::ToSystemState() const {
  return SystemState{Eigen::Vector3d(x, y, theta)};
}

UnicycleState UnicycleState::FromSystemState(const SystemState& s) {
  if (s.dim() != 3) throw std::invalid_argument("unicycle state must be 3-D");
  return {s.coords[0], s.coords[1], s.coords[2]};
}

bool GridWorld::IsObstacle(Cell c) const { return Contains(obstacle_cells, c); }
bool GridWorld::IsGoal(Cell c) const { return Contains(goal_cells, c); }

void UnicycleConfig::Validate() const {
  if (!(k_v > 0.0) || !(k_omega > 0.0)) {
    throw std::invalid_argument("controller gains must be positive");
  }
  if (scenario_budget < 1) {
    throw std::invalid_argument("scenario budget must be >= 1");
  }
}

double WrapAngle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  if (t >= kTwoPi) t = 0.0;
  return t;
}

double WrapToPi(double angle) {
  double a = std::fmod(angle + std::numbers::pi, kTwoPi);
  if (a <= 0.0) a += kTwoPi;
  return a - std::numbers::pi;
}

Cell CellOf(const Eigen::Vector2d& p) {
  const int i = static_cast<int>(std::floor((p.x() - kXMin) / kCellWidth));
  const int j = static_cast<int>(std::floor((p.y() - kYMin) / kCellHeight));
  return {std::clamp(i, 0, kGridCols - 1), std::clamp(j, 0, kGridRows - 1)};
}

Eigen::Vector2d CellCenter(Cell c) {
  return {kXMin + kCellWidth * (c.i + 0.5), kYMin + kCellHeight * (c.j + 0.5)};
}

bool InArena(const Eigen::Vector2d& p) {
  return p.x() >= kXMin && p.x() <= kXMax && p.y() >= kYMin && p.y() <= kYMax;
}

UnicycleState UnicycleStep(const UnicycleState& state, const UnicycleInput& u) {
  if (!(std::abs(u.v) <= kMaxSpeed + kInputSlack) ||
      !(std::abs(u.omega) <= kMaxTurnRate + kInputSlack)) {
    throw std::invalid_argument("unicycle input outside its bounds");
  }
  UnicycleState next;
  next.x = std::clamp(state.x + kDt * u.v * std::cos(state.theta), kXMin, kXMax);
  next.y = std::clamp(state.y + kDt * u.v * std::sin(state.theta), kYMin, kYMax);
  next.theta = WrapAngle(state.theta + kDt * u.omega);
  return next;
}

UnicycleInput LyapunovController(const UnicycleState& state,
                                 const Eigen::Vector2d& w,
                                 const UnicycleConfig& config) {
  const Eigen::Vector2d delta = w - state.position();
  const double rho = delta.norm();
  const double alpha =
      rho > 0.0 ? WrapToPi(std::atan2(delta.y(), delta.x()) - state.theta)
                : 0.0;
  return {std::clamp(config.k_v * rho * std::cos(alpha), -kMaxSpeed, kMaxSpeed),
          std::clamp(config.k_omega * alpha, -kMaxTurnRate, kMaxTurnRate)};
}

double BarrierH(const UnicycleState& ego, const UnicycleState& other,
                const GridWorld& world) {
  if (world.IsObstacle(CellOf(ego.position()))) return kObstacleBarrier;
  return (ego.position() - other.position()).norm() - kSafeDistance;
}

GridPath ShortestGridPath(Cell from, const GridWorld& world) {
  GridPath best;
  if (!InGrid(from) || world.IsObstacle(from)) return best;
  std::array<bool, kNumCells> blocked{};
  for (Cell c : world.obstacle_cells) blocked[static_cast<std::size_t>(Index(c))] = true;

  std::array<int, kNumCells> hops;
  std::array<double, kNumCells> length;
  hops.fill(-1);
  length.fill(0.0);
  std::deque<int> queue{Index(from)};
  hops[static_cast<std::size_t>(Index(from))] = 0;
  while (!queue.empty()) {
    const int idx = queue.front();
    queue.pop_front();
    const auto u = static_cast<std::size_t>(idx);
    const Cell c = CellAt(idx);
    if (world.IsGoal(c)) {
      // Goals are dequeued in order of hop count; keep the shortest metric
      // length among the first layer that reaches one.
      if (best.transitions < 0) {
        best = {hops[u], length[u]};
      } else if (hops[u] == best.transitions) {
        best.length = std::min(best.length, length[u]);
      }
      continue;
    }
    if (best.transitions >= 0 && hops[u] >= best.transitions) continue;
    const std::array<std::pair<Cell, double>, 4> steps = {{
        {{c.i + 1, c.j}, kCellWidth},
        {{c.i - 1, c.j}, kCellWidth},
        {{c.i, c.j + 1}, kCellHeight},
        {{c.i, c.j - 1}, kCellHeight},
    }};
    for (const auto& [n, pitch] : steps) {
      if (!InGrid(n)) continue;
      const auto v = static_cast<std::size_t>(Index(n));
      if (blocked[v]) continue;
      if (hops[v] < 0) {
        hops[v] = hops[u] + 1;
        length[v] = length[u] + pitch;
        queue.push_back(Index(n));
      } else if (hops[v] == hops[u] + 1) {
        length[v] = std::min(length[v], length[u] + pitch);
      }
    }
  }
  return best;
}

double ShortestPathCost(const Eigen::Vector2d& w, const GridWorld& world) {
  const GridPath path = ShortestGridPath(CellOf(w), world);
  return path.transitions < 0 ? kInfeasibleCost : path.length;
}

double NmpcBCost(const Eigen::Vector2d& w, const UnicycleState& state,
                 const GridWorld& world, const UnicycleConfig& config) {
  UnicycleState x = state;
  for (int j = 1; j <= kPredictionSteps; ++j) {
    x = UnicycleStep(x, LyapunovController(x, w, config));
    if (BarrierH(x, world.uncontrolled_state, world) < 0.0) {
      return kInfeasibleCost;
    }
  }
  return ShortestPathCost(w, world);
}

bool NmpcBIsFeasible(const Eigen::Vector2d& w, const UnicycleState& state) {
  if (!InArena(w)) return false;
  const double rho = (w - state.position()).norm();
  return rho >= kAnnulusInner && rho <= kAnnulusOuter;
}

std::optional<Eigen::Vector2d> NmpcBSampleFeasible(const UnicycleState& state,
                                                   Rng& rng, int budget) {
  const double x_lo = std::max(state.x - kAnnulusOuter, kXMin);
  const double x_hi = std::min(state.x + kAnnulusOuter, kXMax);
  const double y_lo = std::max(state.y - kAnnulusOuter, kYMin);
  const double y_hi = std::min(state.y + kAnnulusOuter, kYMax);
  if (!(x_hi > x_lo && y_hi > y_lo)) return std::nullopt;
  for (int attempt = 0; attempt < budget; ++attempt) {
    const double wx = rng.Uniform(x_lo, x_hi);
    const double wy = rng.Uniform(y_lo, y_hi);
    const Eigen::Vector2d w(wx, wy);
    if (NmpcBIsFeasible(w, state)) return w;
  }
  return std::nullopt;
}

UnicycleState UncontrolledAgentStep(const UnicycleState& state,
                                    const GridWorld& world,
                                    const UnicycleConfig& config) {
  return UnicycleStep(
      state,
      LyapunovController(state, CellCenter(world.uncontrolled_goal), config));
}

std::string ValidateGridWorld(const GridWorld& world) {
  if (world.obstacle_cells.size() != static_cast<std::size_t>(kNumObstacles)) {
    return "expected 8 obstacle cells";
  }
  if (world.goal_cells.size() != static_cast<std::size_t>(kNumGoals)) {
    return "expected 3 goal cells";
  }
  for (Cell c : world.obstacle_cells) {
    if (!InGrid(c)) return "obstacle cell outside the grid";
  }
  for (Cell c : world.goal_cells) {
    if (!InGrid(c)) return "goal cell outside the grid";
    if (world.IsObstacle(c)) return "goal overlaps a static obstacle";
  }
  if (!Distinct(world.obstacle_cells)) return "obstacle cells are not distinct";
  if (!Distinct(world.goal_cells)) return "goal cells are not distinct";
  if (!InGrid(world.uncontrolled_goal)) return "uncontrolled goal outside grid";
  if (world.IsObstacle(world.uncontrolled_goal)) {
    return "uncontrolled goal is an obstacle cell";
  }
  if (!InArena(world.uncontrolled_state.position())) {
    return "uncontrolled agent outside the arena";
  }
  return {};
}

std::string ValidateUnicycleScenario(const UnicycleState& ego,
                                     const GridWorld& world) {
  if (std::string err = ValidateGridWorld(world); !err.empty()) return err;
  if (!InArena(ego.position())) return "ego outside the arena";
  const Cell cell = CellOf(ego.position());
  if (world.IsObstacle(cell)) return "ego starts in an obstacle cell";
  if (ShortestGridPath(cell, world).transitions < 0) {
    return "no obstacle-free path from the ego to a goal";
  }
  if ((ego.position() - world.uncontrolled_state.position()).norm() <
      kMinAgentSeparation) {
    return "agents closer than 0.3 m";
  }
  return {};
}

InputSequence WaypointSequence(const Eigen::Vector2d& w) {
  return InputSequence(1, 2, Eigen::VectorXd(w));
}

UnicycleProblem::UnicycleProblem(UnicycleConfig config,
                                 std::optional<GridWorld> fixed_world)
    : config_(config), fixed_world_(std::move(fixed_world)) {
  config_.Validate();
  if (fixed_world_) {
    if (std::string err = ValidateGridWorld(*fixed_world_); !err.empty()) {
      throw std::invalid_argument("invalid grid world: " + err);
    }
  }
}

std::optional<InputSequence> UnicycleProblem::SampleFeasible(
    const ScenarioType& scenario, Rng& rng, int budget) const {
  auto w = NmpcBSampleFeasible(UnicycleState::FromSystemState(scenario.state),
                               rng, budget);
  if (!w) return std::nullopt;
  return WaypointSequence(*w);
}

double UnicycleProblem::Cost(const InputSequence& sequence,
                             const ScenarioType& scenario) const {
  return NmpcBCost(sequence.step(0), UnicycleState::FromSystemState(scenario.state),
                   scenario.env, config_);
}

bool UnicycleProblem::IsFeasible(const InputSequence& sequence,
                                 const ScenarioType& scenario) const {
  if (sequence.horizon() != 1 || sequence.input_dim() != 2) return false;
  return NmpcBIsFeasible(sequence.step(0),
                         UnicycleState::FromSystemState(scenario.state));
}

SystemState UnicycleProblem::StepClosedLoop(const ScenarioType& scenario,
                                            const InputSequence& plan) const {
  const UnicycleState x = UnicycleState::FromSystemState(scenario.state);
  return UnicycleStep(x, LyapunovController(x, plan.step(0), config_))
      .ToSystemState();
}

UnicycleProblem::ScenarioType UnicycleProblem::SampleScenario(Rng& rng) const {
  for (int attempt = 0; attempt < config_.scenario_budget; ++attempt) {
    GridWorld world;
    if (fixed_world_) {
      world = *fixed_world_;
    } else {
      // Partial Fisher-Yates: the first 8 cells are obstacles, the next 3
      // goals.
      std::array<int, kNumCells> cells;
      for (int k = 0; k < kNumCells; ++k) cells[static_cast<std::size_t>(k)] = k;
      for (int k = 0; k < kNumObstacles + kNumGoals; ++k) {
        const auto pick = k + static_cast<int>(rng.UniformInt(
                                  static_cast<std::uint64_t>(kNumCells - k)));
        std::swap(cells[static_cast<std::size_t>(k)],
                  cells[static_cast<std::size_t>(pick)]);
      }
      for (int k = 0; k < kNumObstacles; ++k) {
        world.obstacle_cells.push_back(CellAt(cells[static_cast<std::size_t>(k)]));
      }
      for (int k = kNumObstacles; k < kNumObstacles + kNumGoals; ++k) {
        world.goal_cells.push_back(CellAt(cells[static_cast<std::size_t>(k)]));
      }
      const auto free_pick = static_cast<std::size_t>(
          kNumObstacles +
          static_cast<int>(rng.UniformInt(kNumCells - kNumObstacles)));
      world.uncontrolled_goal = CellAt(cells[free_pick]);
      world.uncontrolled_state = UniformState(rng);
    }
    const UnicycleState ego = UniformState(rng);
    if (!ValidateUnicycleScenario(ego, world).empty()) continue;
    return ScenarioType{ego.ToSystemState(), std::move(world)};
  }
  throw SampleBudgetError("no admissible grid world within budget");
}

std::optional<InputSequence> UnicycleProblem::CandidateWitness(
    const ScenarioType& scenario) const {
  const UnicycleState x = UnicycleState::FromSystemState(scenario.state);
  const double mid = 0.5 * (kAnnulusInner + kAnnulusOuter);
  for (int k = 0; k < 8; ++k) {
    const double phi = k * std::numbers::pi / 4.0;
    const Eigen::Vector2d w =
        x.position() + mid * Eigen::Vector2d(std::cos(phi), std::sin(phi));
    if (NmpcBIsFeasible(w, x)) return WaypointSequence(w);
  }
  return std::nullopt;
}

void to_json(nlohmann::ordered_json& j, const Cell& c) { j = Json{c.i, c.j}; }

void from_json(const nlohmann::ordered_json& j, Cell& c) {
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("bad cell");
  c = {j[0].get<int>(), j[1].get<int>()};
}

void to_json(nlohmann::ordered_json& j, const UnicycleState& s) {
  j = Json{s.x, s.y, s.theta};
}

void from_json(const nlohmann::ordered_json& j, UnicycleState& s) {
  if (!j.is_array() || j.size() != 3) throw std::invalid_argument("bad state");
  s = {j[0].get<double>(), j[1].get<double>(), WrapAngle(j[2].get<double>())};
}

void to_json(nlohmann::ordered_json& j, const GridWorld& world) {
  j = Json{{"obstacle_cells", world.obstacle_cells},
           {"goal_cells", world.goal_cells},
           {"uncontrolled",
            Json{{"state", world.uncontrolled_state},
                 {"goal_cell", world.uncontrolled_goal}}}};
}

void from_json(const nlohmann::ordered_json& j, GridWorld& world) {
  world.obstacle_cells = j.at("obstacle_cells").get<std::vector<Cell>>();
  world.goal_cells = j.at("goal_cells").get<std::vector<Cell>>();
  world.uncontrolled_state = j.at("uncontrolled").at("state").get<UnicycleState>();
  world.uncontrolled_goal = j.at("uncontrolled").at("goal_cell").get<Cell>();
}

void to_json(nlohmann::ordered_json& j, const UnicycleConfig& config) {
  j = Json{{"k_v", config.k_v},
           {"k_omega", config.k_omega},
           {"scenario_budget", config.scenario_budget}};
}

GridWorldFile ParseGridWorldFile(const nlohmann::ordered_json& j) {
  GridWorldFile file;
  file.world = j.get<GridWorld>();
  if (std::string err = ValidateGridWorld(file.world); !err.empty()) {
    throw std::invalid_argument("invalid grid world: " + err);
  }
  if (j.contains("ego_state")) {
    file.ego_state = j.at("ego_state").get<UnicycleState>();
    if (std::string err = ValidateUnicycleScenario(*file.ego_state, file.world);
        !err.empty()) {
      throw std::invalid_argument("invalid ego state: " + err);
    }
  }
  return file;
}

GridWorldFile LoadGridWorldFile(const std::string& path) {
  return ParseGridWorldFile(ReadJsonFile(path));
}

nlohmann::ordered_json GridWorldFileToJson(const GridWorldFile& file) {
  Json j = file.world;
  if (file.ego_state) j["ego_state"] = *file.ego_state;
  return j;
}

}  // namespace riskcert
