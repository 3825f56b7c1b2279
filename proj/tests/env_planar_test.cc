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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "riskcert/json_util.h"
#include "riskcert/percentile.h"
#include "oracles.h"
#include "test_problems.h"

namespace riskcert {
namespace {

using namespace oracle;

InputSequence RandomSequence(int horizon, double half_width, Rng& rng) {
  InputSequence s(horizon, 2);
  for (int k = 0; k < 2 * horizon; ++k) {
    s.flat()[k] = rng.Uniform(-half_width, half_width);
  }
  return s;
}

TEST(PlanarDynamicsTest, Examples) {
  EXPECT_EQ(PlanarDynamics({1, 1}, {0, 0}), Eigen::Vector2d(1, 1));
  EXPECT_TRUE(PlanarDynamics({1, 1}, {0.03, 0}).isApprox(Eigen::Vector2d(1.03, 1)));
  EXPECT_TRUE(PlanarDynamics({1, 1}, {0.01, 0}, {0.2, -0.1})
                  .isApprox(Eigen::Vector2d(1.21, 0.9)));
}

TEST(PlanarDynamicsTest, RolloutMatchesPrefixSums) {
  Rng rng(1);
  const InputSequence s = RandomSequence(20, 0.03, rng);
  Eigen::Vector2d p(0.7, 1.9);
  double sx = 0.0, sy = 0.0;
  for (int i = 0; i < 20; ++i) {
    p = PlanarDynamics(p, s.step(i));
    sx += s.flat()[2 * i];
    sy += s.flat()[2 * i + 1];
    EXPECT_NEAR(p.x(), 0.7 + sx, 1e-14);
    EXPECT_NEAR(p.y(), 1.9 + sy, 1e-14);
  }
}

TEST(PlanarCostTest, HandComputedValues) {
  PlanarConfig c;
  c.horizon = 1;
  c.goal = {0.0, 1.0};
  InputSequence s(1, 2, Eigen::Vector2d(0.0, 0.03));
  EXPECT_NEAR(PlanarCost(s, {0, 0}, {}, c), 9.73, 1e-12);

  PlanarConfig d;
  InputSequence zero(d.horizon, 2);
  EXPECT_EQ(PlanarCost(zero, d.goal, {}, d), 0.0);
}

TEST(PlanarCostTest, MatchesDuplicateEvaluator) {
  PlanarConfig c;
  Rng rng(2);
  for (int t = 0; t < 1000; ++t) {
    const InputSequence s = RandomSequence(c.horizon, 0.03, rng);
    const double x0 = rng.Uniform(0, 5), y0 = rng.Uniform(0, 4);
    PlanarEnvironment env;
    if (t % 2) env.drift = {rng.Uniform(-0.1, 0.1), rng.Uniform(-0.1, 0.1)};
    const double oracle = OracleCost(ToRaw(s), x0, y0, c.goal.x(), c.goal.y(),
                                     c.terminal_weight, env.drift.x(),
                                     env.drift.y());
    EXPECT_NEAR(PlanarCost(s, {x0, y0}, env, c), oracle, 1e-12);
  }
}

TEST(PlanarCostTest, GradientMatchesFiniteDifferences) {
  PlanarProblem problem(PlanarConfig{});
  Rng rng(3);
  int checked = 0;
  while (checked < 1000) {
    Rng srng = rng.Split(static_cast<std::uint64_t>(checked));
    const auto scenario = problem.SampleScenario(srng);
    const auto seq = problem.SampleFeasible(scenario, srng, 100000);
    if (!seq) continue;
    const Eigen::VectorXd g = *problem.CostGradient(*seq, scenario);
    const Eigen::VectorXd fd = FiniteDifferenceGradient(problem, *seq, scenario);
    EXPECT_LE((g - fd).norm(), 1e-5 * g.norm()) << checked;
    ++checked;
  }
}

TEST(PlanarFeasibleTest, Examples) {
  PlanarConfig c;
  InputSequence straight(c.horizon, 2);
  for (int i = 0; i < c.horizon; ++i) straight.step(i) = Eigen::Vector2d(0.03, 0);
  EXPECT_TRUE(PlanarIsFeasible(straight, {1.0, 2.0}, {}, c));

  // Only the third waypoint x^3 = (1.09, 2) comes within r of the obstacle.
  PlanarEnvironment env;
  env.obstacles.push_back({1.09, 2.299});
  for (int i : {0, 1, 2, 4}) {
    EXPECT_TRUE(InFreeSpace({1.0 + 0.03 * i, 2.0}, env, c)) << i;
  }
  EXPECT_FALSE(InFreeSpace({1.09, 2.0}, env, c));
  EXPECT_FALSE(PlanarIsFeasible(straight, {1.0, 2.0}, env, c));

  InputSequence too_long = straight;
  too_long.step(4) = Eigen::Vector2d(0.031, 0);
  EXPECT_FALSE(PlanarIsFeasible(too_long, {1.0, 2.0}, {}, c));
}

TEST(PlanarFeasibleTest, MatchesDuplicateEvaluator) {
  PlanarConfig c;
  Rng rng(4);
  int feasible = 0;
  for (int t = 0; t < 10000; ++t) {
    PlanarEnvironment env;
    for (int k = 0; k < 5; ++k) {
      env.obstacles.push_back({rng.Uniform(0, 5), rng.Uniform(0, 4)});
    }
    const double x0 = rng.Uniform(0, 5), y0 = rng.Uniform(0, 4);
    const InputSequence s = RandomSequence(c.horizon, 0.023, rng);
    const bool got = PlanarIsFeasible(s, {x0, y0}, env, c);
    EXPECT_EQ(got, OracleFeasible(ToRaw(s), x0, y0, env.obstacles, c)) << t;
    feasible += got;
  }
  // Both outcomes are exercised.
  EXPECT_GT(feasible, 1000);
  EXPECT_LT(feasible, 9000);
}

TEST(PlanarSampleTest, ObstacleFreeAcceptsEveryDraw) {
  PlanarConfig c;
  Rng rng(5);
  for (int t = 0; t < 1000; ++t) {
    const auto s = PlanarSampleFeasible({2.5, 2.0}, {}, c, rng, 1);
    ASSERT_TRUE(s.has_value());
    EXPECT_TRUE(PlanarIsFeasible(*s, {2.5, 2.0}, {}, c));
  }
}

TEST(PlanarSampleTest, EnclosedStartHasNoDraw) {
  // Eight obstacles just beyond r: the start is free but every increment
  // longer than about 1e-9 enters one of them.
  PlanarConfig c;
  PlanarEnvironment env;
  const Eigen::Vector2d x(2.5, 2.0);
  for (int k = 0; k < 8; ++k) {
    const double a = k * std::numbers::pi / 4.0;
    env.obstacles.push_back(x + (1.0 + 1e-9) * c.collision_radius *
                                    Eigen::Vector2d(std::cos(a), std::sin(a)));
  }
  ASSERT_TRUE(InFreeSpace(x, env, c));
  Rng rng(6);
  EXPECT_FALSE(PlanarSampleFeasible(x, env, c, rng, 2000).has_value());
}

TEST(PlanarSampleTest, FirstIncrementAngleIsUniform) {
  PlanarConfig c;
  Rng rng(7);
  std::vector<std::int64_t> bins(16, 0);
  for (int t = 0; t < 100000; ++t) {
    const auto s = PlanarSampleFeasible({2.5, 2.0}, {}, c, rng, 1);
    const double a = std::atan2(s->flat()[1], s->flat()[0]) + std::numbers::pi;
    const int b = std::min(15, static_cast<int>(a / (2 * std::numbers::pi) * 16));
    ++bins[b];
  }
  EXPECT_LT(testing::ChiSquareUniform(bins), testing::kChiSquare15Critical);
}

TEST(PlanarSampleTest, IncrementRadiusFollowsDiskLaw) {
  // Uniform on a disk: P[|u| <= s * rho] = rho^2.
  PlanarConfig c;
  Rng rng(8);
  std::vector<std::int64_t> bins(16, 0);
  for (int t = 0; t < 50000; ++t) {
    const auto s = PlanarSampleFeasible({2.5, 2.0}, {}, c, rng, 1);
    const double rho = s->step(0).norm() / c.step_bound;
    ++bins[std::min(15, static_cast<int>(rho * rho * 16))];
  }
  EXPECT_LT(testing::ChiSquareUniform(bins), testing::kChiSquare15Critical);
}

TEST(PlanarScenarioTest, NoObstaclesAlwaysAdmissible) {
  PlanarConfig c;
  c.n_obstacles = 0;
  c.scenario_budget = 1;
  PlanarProblem problem(c);
  Rng rng(9);
  for (int t = 0; t < 1000; ++t) EXPECT_NO_THROW(problem.SampleScenario(rng));
}

TEST(PlanarScenarioTest, DefaultScenariosAreAdmissibleAndFree) {
  PlanarConfig c;
  PlanarProblem problem(c);
  Rng rng(10);
  for (int t = 0; t < 1000; ++t) {
    const auto s = problem.SampleScenario(rng);
    EXPECT_EQ(s.env.obstacles.size(), 5u);
    EXPECT_TRUE(InFreeSpace(Position(s.state), s.env, c));
    EXPECT_TRUE(InFreeSpace(c.goal, s.env, c));
  }
  // Single-attempt acceptance rate, estimated by Monte Carlo.
  c.scenario_budget = 1;
  PlanarProblem once(c);
  int accepted = 0;
  for (int t = 0; t < 2000; ++t) {
    Rng r = Rng(11).Split(static_cast<std::uint64_t>(t));
    try {
      (void)once.SampleScenario(r);
      ++accepted;
    } catch (const SampleBudgetError&) {
    }
  }
  EXPECT_GT(accepted, 1400);
}

TEST(PlanarPathTest, WallBlocksAndGapOpens) {
  PlanarConfig c;
  PlanarEnvironment wall;
  for (double y = 0.0; y <= 4.0 + 1e-9; y += 0.4) wall.obstacles.push_back({2.5, y});
  EXPECT_FALSE(PlanarPathExists({1.0, 2.0}, wall, c));
  PlanarEnvironment gap = wall;
  gap.obstacles.erase(gap.obstacles.begin() + 5);
  gap.obstacles.erase(gap.obstacles.begin() + 5);
  EXPECT_TRUE(PlanarPathExists({1.0, 2.0}, gap, c));
  EXPECT_TRUE(PlanarPathExists({1.0, 2.0}, {}, c));
}

TEST(PlanarProblemTest, ProjectionLandsOnTheStepDisk) {
  PlanarProblem problem(PlanarConfig{});
  InputSequence s(20, 2);
  s.step(0) = Eigen::Vector2d(0.3, 0.4);
  s.step(1) = Eigen::Vector2d(0.01, 0.0);
  problem.ProjectInputs(s);
  EXPECT_NEAR(s.step(0).norm(), 0.03, 1e-15);
  EXPECT_NEAR(s.step(0).x() / s.step(0).y(), 0.75, 1e-12);
  EXPECT_EQ(s.step(1), Eigen::Vector2d(0.01, 0.0));
}

TEST(PlanarEnvFileTest, ParsesAndRoundTrips) {
  const PlanarEnvFile file =
      LoadPlanarEnvFile(testing::DataPath("trap_planar.json"));
  EXPECT_EQ(file.config.horizon, 20);
  EXPECT_EQ(file.config.step_bound, 0.001);
  EXPECT_EQ(file.env.drift, Eigen::Vector2d(0.2, 0.0));
  const PlanarEnvFile again = ParsePlanarEnvFile(PlanarEnvFileToJson(file));
  EXPECT_EQ(again.env.drift, file.env.drift);
  EXPECT_EQ(again.config.goal, file.config.goal);
  EXPECT_EQ(again.config.collision_radius, file.config.collision_radius);
}

TEST(PlanarEnvFileTest, RejectsMalformedFiles) {
  EXPECT_THROW(ParsePlanarEnvFile(Json::parse(R"({"obstacles": [[9, 9]]})")),
               std::invalid_argument);
  EXPECT_THROW(ParsePlanarEnvFile(Json::parse(R"({"obstacles": [], "H": 0})")),
               std::invalid_argument);
  EXPECT_ANY_THROW(ParsePlanarEnvFile(Json::parse(R"({"goal": [1, 1]})")));
}

}  // namespace
}  // namespace riskcert
