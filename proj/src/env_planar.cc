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

#include "riskcert/env_planar.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

#include "riskcert/json_util.h"

namespace riskcert {
namespace {

// Slack on the step-bound test so that projected increments, whose norm can
// round one ulp above the bound, stay admissible.
constexpr double kStepSlack = 1e-12;

bool InBox(const Eigen::Vector2d& p, const PlanarConfig& c) {
  return p.x() >= c.box_min.x() && p.x() <= c.box_max.x() &&
         p.y() >= c.box_min.y() && p.y() <= c.box_max.y();
}

Eigen::Vector2d UniformInDisk(double radius, Rng& rng) {
  while (true) {
    const double a = rng.Uniform(-radius, radius);
    const double b = rng.Uniform(-radius, radius);
    if (a * a + b * b <= radius * radius) return {a, b};
  }
}

Eigen::Vector2d UniformInBox(const PlanarConfig& c, Rng& rng) {
  const double x = rng.Uniform(c.box_min.x(), c.box_max.x());
  const double y = rng.Uniform(c.box_min.y(), c.box_max.y());
  return {x, y};
}

void CheckSequence(const InputSequence& seq, const PlanarConfig& config) {
  if (seq.horizon() != config.horizon || seq.input_dim() != 2) {
    throw std::invalid_argument("planar sequence must be H x 2");
  }
}

}  // namespace

void PlanarConfig::Validate() const {
  if (!(box_max.x() > box_min.x() && box_max.y() > box_min.y())) {
    throw std::invalid_argument("state box is empty");
  }
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  if (!(step_bound > 0.0)) throw std::invalid_argument("step_bound must be > 0");
  if (!(collision_radius > 0.0)) {
    throw std::invalid_argument("collision radius must be > 0");
  }
  if (n_obstacles < 0) throw std::invalid_argument("n_obstacles must be >= 0");
  if (!InBox(goal, *this)) throw std::invalid_argument("goal outside the box");
  if (!(terminal_weight >= 0.0)) {
    throw std::invalid_argument("terminal weight must be >= 0");
  }
  if (scenario_budget < 1) {
    throw std::invalid_argument("scenario budget must be >= 1");
  }
}

Eigen::Vector2d PlanarDynamics(const Eigen::Vector2d& x,
                               const Eigen::Vector2d& u,
                               const Eigen::Vector2d& drift) {
  return x + u + drift;
}

bool InFreeSpace(const Eigen::Vector2d& p, const PlanarEnvironment& env,
                 const PlanarConfig& config) {
  if (!InBox(p, config)) return false;
  const double r2 = config.collision_radius * config.collision_radius;
  for (const auto& d : env.obstacles) {
    if ((p - d).squaredNorm() < r2) return false;
  }
  return true;
}

double PlanarCost(const InputSequence& seq, const Eigen::Vector2d& x,
                  const PlanarEnvironment& env, const PlanarConfig& config) {
  CheckSequence(seq, config);
  Eigen::Vector2d p = x;
  double length = 0.0;
  for (int i = 0; i < seq.horizon(); ++i) {
    const Eigen::Vector2d next = PlanarDynamics(p, seq.step(i), env.drift);
    length += (next - p).norm();
    p = next;
  }
  return config.terminal_weight * (p - config.goal).norm() + length;
}

Eigen::VectorXd PlanarCostGradient(const InputSequence& seq,
                                   const Eigen::Vector2d& x,
                                   const PlanarEnvironment& env,
                                   const PlanarConfig& config) {
  CheckSequence(seq, config);
  Eigen::VectorXd grad(seq.flat().size());
  Eigen::Vector2d p = x;
  for (int i = 0; i < seq.horizon(); ++i) {
    const Eigen::Vector2d segment = seq.step(i) + env.drift;
    const double len = segment.norm();
    grad.segment<2>(2 * i) =
        len > 0.0 ? Eigen::Vector2d(segment / len) : Eigen::Vector2d::Zero();
    p += segment;
  }
  // x^H depends on every increment with unit Jacobian.
  const Eigen::Vector2d miss = p - config.goal;
  const double miss_len = miss.norm();
  if (miss_len > 0.0) {
    const Eigen::Vector2d terminal = config.terminal_weight * miss / miss_len;
    for (int i = 0; i < seq.horizon(); ++i) grad.segment<2>(2 * i) += terminal;
  }
  return grad;
}

bool PlanarIsFeasible(const InputSequence& seq, const Eigen::Vector2d& x,
                      const PlanarEnvironment& env,
                      const PlanarConfig& config) {
  if (seq.horizon() != config.horizon || seq.input_dim() != 2) return false;
  if (!InFreeSpace(x, env, config)) return false;
  const double bound = config.step_bound * (1.0 + kStepSlack);
  Eigen::Vector2d p = x;
  for (int i = 0; i < seq.horizon(); ++i) {
    if (!(seq.step(i).norm() <= bound)) return false;
    p = PlanarDynamics(p, seq.step(i), env.drift);
    if (!InFreeSpace(p, env, config)) return false;
  }
  return true;
}

std::optional<InputSequence> PlanarSampleFeasible(const Eigen::Vector2d& x,
                                                  const PlanarEnvironment& env,
                                                  const PlanarConfig& config,
                                                  Rng& rng, int budget) {
  if (!InFreeSpace(x, env, config)) return std::nullopt;
  InputSequence seq(config.horizon, 2);
  for (int attempt = 0; attempt < budget; ++attempt) {
    Eigen::Vector2d p = x;
    bool ok = true;
    for (int i = 0; i < config.horizon && ok; ++i) {
      const Eigen::Vector2d u = UniformInDisk(config.step_bound, rng);
      seq.step(i) = u;
      p = PlanarDynamics(p, u, env.drift);
      ok = InFreeSpace(p, env, config);
    }
    if (ok) return seq;
  }
  return std::nullopt;
}

bool PlanarPathExists(const Eigen::Vector2d& start,
                      const PlanarEnvironment& env,
                      const PlanarConfig& config) {
  if (env.obstacles.empty()) return true;
  const Eigen::Vector2d extent = config.box_max - config.box_min;
  const double cell_target = config.collision_radius / 4.0;
  const int nx = std::max(1, static_cast<int>(std::ceil(extent.x() / cell_target)));
  const int ny = std::max(1, static_cast<int>(std::ceil(extent.y() / cell_target)));
  const double hx = extent.x() / nx;
  const double hy = extent.y() / ny;
  auto cell_of = [&](const Eigen::Vector2d& p) {
    const int i = std::clamp(static_cast<int>((p.x() - config.box_min.x()) / hx), 0, nx - 1);
    const int j = std::clamp(static_cast<int>((p.y() - config.box_min.y()) / hy), 0, ny - 1);
    return j * nx + i;
  };
  const int source = cell_of(start);
  const int target = cell_of(config.goal);
  std::vector<char> seen(static_cast<std::size_t>(nx * ny), 0);
  auto free_cell = [&](int idx) {
    if (idx == source || idx == target) return true;
    const Eigen::Vector2d center(config.box_min.x() + hx * (idx % nx + 0.5),
                                 config.box_min.y() + hy * (idx / nx + 0.5));
    return InFreeSpace(center, env, config);
  };
  std::deque<int> frontier{source};
  seen[static_cast<std::size_t>(source)] = 1;
  while (!frontier.empty()) {
    const int idx = frontier.front();
    frontier.pop_front();
    if (idx == target) return true;
    const int i = idx % nx;
    const int j = idx / nx;
    const int neighbors[4][2] = {{i + 1, j}, {i - 1, j}, {i, j + 1}, {i, j - 1}};
    for (const auto& n : neighbors) {
      if (n[0] < 0 || n[0] >= nx || n[1] < 0 || n[1] >= ny) continue;
      const int next = n[1] * nx + n[0];
      if (seen[static_cast<std::size_t>(next)] || !free_cell(next)) continue;
      seen[static_cast<std::size_t>(next)] = 1;
      frontier.push_back(next);
    }
  }
  return false;
}

PlanarProblem::PlanarProblem(PlanarConfig config,
                             std::optional<PlanarEnvironment> fixed_env)
    : config_(std::move(config)), fixed_env_(std::move(fixed_env)) {
  config_.Validate();
}

std::optional<InputSequence> PlanarProblem::SampleFeasible(
    const ScenarioType& scenario, Rng& rng, int budget) const {
  return PlanarSampleFeasible(Position(scenario.state), scenario.env, config_,
                              rng, budget);
}

double PlanarProblem::Cost(const InputSequence& sequence,
                           const ScenarioType& scenario) const {
  return PlanarCost(sequence, Position(scenario.state), scenario.env, config_);
}

bool PlanarProblem::IsFeasible(const InputSequence& sequence,
                               const ScenarioType& scenario) const {
  return PlanarIsFeasible(sequence, Position(scenario.state), scenario.env,
                          config_);
}

SystemState PlanarProblem::StepClosedLoop(const ScenarioType& scenario,
                                          const InputSequence& plan) const {
  const Eigen::Vector2d next =
      PlanarDynamics(Position(scenario.state), plan.step(0), scenario.env.drift);
  return SystemState{next};
}

PlanarProblem::ScenarioType PlanarProblem::SampleScenario(Rng& rng) const {
  for (int attempt = 0; attempt < config_.scenario_budget; ++attempt) {
    PlanarEnvironment env;
    if (fixed_env_) {
      env = *fixed_env_;
    } else {
      env.obstacles.reserve(static_cast<std::size_t>(config_.n_obstacles));
      for (int k = 0; k < config_.n_obstacles; ++k) {
        env.obstacles.push_back(UniformInBox(config_, rng));
      }
      if (!InFreeSpace(config_.goal, env, config_)) continue;
    }
    const Eigen::Vector2d start = UniformInBox(config_, rng);
    if (!InFreeSpace(start, env, config_)) continue;
    if (!PlanarPathExists(start, env, config_)) continue;
    return ScenarioType{SystemState{start}, std::move(env)};
  }
  throw SampleBudgetError("no admissible planar scenario within budget");
}

std::optional<Eigen::VectorXd> PlanarProblem::CostGradient(
    const InputSequence& sequence, const ScenarioType& scenario) const {
  return PlanarCostGradient(sequence, Position(scenario.state), scenario.env,
                            config_);
}

void PlanarProblem::ProjectInputs(InputSequence& sequence) const {
  for (int i = 0; i < sequence.horizon(); ++i) {
    const double norm = sequence.step(i).norm();
    if (norm > config_.step_bound) sequence.step(i) *= config_.step_bound / norm;
  }
}

std::optional<InputSequence> PlanarProblem::CandidateWitness(
    const ScenarioType& scenario) const {
  const Eigen::Vector2d& drift = scenario.env.drift;
  const double strength = drift.norm();
  Eigen::Vector2d hold = -drift;
  if (strength > config_.step_bound) hold *= config_.step_bound / strength;
  InputSequence seq(config_.horizon, 2);
  for (int i = 0; i < config_.horizon; ++i) seq.step(i) = hold;
  return seq;
}

bool PlanarProblem::ProvablyEmpty(const ScenarioType& scenario) const {
  const Eigen::Vector2d x = Position(scenario.state);
  if (!InFreeSpace(x, scenario.env, config_)) return true;
  const Eigen::Vector2d& drift = scenario.env.drift;
  const double strength = drift.norm();
  if (strength <= config_.step_bound) return false;
  // Along e = drift/|drift| every step advances by at least
  // |drift| - step_bound, so e.x^H is bounded below; compare with the box's
  // support value in direction e.
  const Eigen::Vector2d e = drift / strength;
  const double support =
      std::max(e.x() * config_.box_min.x(), e.x() * config_.box_max.x()) +
      std::max(e.y() * config_.box_min.y(), e.y() * config_.box_max.y());
  const double lower =
      e.dot(x) + config_.horizon * (strength - config_.step_bound);
  return lower > support + 1e-12;
}

void to_json(nlohmann::ordered_json& j, const PlanarConfig& c) {
  j = Json{{"box_min", VectorToJson(c.box_min)},
           {"box_max", VectorToJson(c.box_max)},
           {"horizon", c.horizon},
           {"step_bound", c.step_bound},
           {"collision_radius", c.collision_radius},
           {"n_obstacles", c.n_obstacles},
           {"goal", VectorToJson(c.goal)},
           {"terminal_weight", c.terminal_weight},
           {"scenario_budget", c.scenario_budget}};
}

void to_json(nlohmann::ordered_json& j, const PlanarEnvironment& env) {
  Json obstacles = Json::array();
  for (const auto& d : env.obstacles) obstacles.push_back(VectorToJson(d));
  j = Json{{"obstacles", std::move(obstacles)},
           {"drift", VectorToJson(env.drift)}};
}

void from_json(const nlohmann::ordered_json& j, PlanarEnvironment& env) {
  env.obstacles.clear();
  for (const auto& d : j.at("obstacles")) env.obstacles.push_back(Vec2FromJson(d));
  env.drift = j.contains("drift") ? Vec2FromJson(j.at("drift"))
                                  : Eigen::Vector2d::Zero();
}

PlanarEnvFile ParsePlanarEnvFile(const nlohmann::ordered_json& j) {
  PlanarEnvFile file;
  from_json(j, file.env);
  file.config.n_obstacles = static_cast<int>(file.env.obstacles.size());
  if (j.contains("goal")) file.config.goal = Vec2FromJson(j.at("goal"));
  if (j.contains("r")) file.config.collision_radius = j.at("r").get<double>();
  if (j.contains("H")) file.config.horizon = j.at("H").get<int>();
  if (j.contains("step_bound")) {
    file.config.step_bound = j.at("step_bound").get<double>();
  }
  if (j.contains("start")) file.start = Vec2FromJson(j.at("start"));
  file.config.Validate();
  for (const auto& d : file.env.obstacles) {
    if (!InBox(d, file.config)) {
      throw std::invalid_argument("obstacle outside the state box");
    }
  }
  return file;
}

PlanarEnvFile LoadPlanarEnvFile(const std::string& path) {
  return ParsePlanarEnvFile(ReadJsonFile(path));
}

nlohmann::ordered_json PlanarEnvFileToJson(const PlanarEnvFile& file) {
  Json j = file.env;
  j["goal"] = VectorToJson(file.config.goal);
  j["r"] = file.config.collision_radius;
  j["H"] = file.config.horizon;
  j["step_bound"] = file.config.step_bound;
  if (file.start) j["start"] = VectorToJson(*file.start);
  return j;
}

}  // namespace riskcert
