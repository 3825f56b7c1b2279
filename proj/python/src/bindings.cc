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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "cli.h"
#include "riskcert/env_planar.h"
#include "riskcert/guarantees.h"
#include "riskcert/percentile.h"
#include "riskcert/rng.h"

namespace py = pybind11;

namespace {

using Point = std::pair<double, double>;

py::dict BoundToDict(const riskcert::ConfidenceBound& b) {
  py::dict d;
  d["kind"] = std::string(riskcert::ToString(b.kind));
  d["epsilon"] = b.epsilon;
  d["n_samples"] = b.n_samples;
  d["threshold"] = b.threshold;
  d["confidence"] = b.confidence;
  return d;
}

riskcert::PlanarEnvironment MakeEnv(const std::vector<Point>& obstacles) {
  riskcert::PlanarEnvironment env;
  for (const auto& [x, y] : obstacles) env.obstacles.emplace_back(x, y);
  return env;
}

riskcert::InputSequence MakeSequence(const std::vector<Point>& steps) {
  riskcert::InputSequence seq(static_cast<int>(steps.size()), 2);
  for (std::size_t i = 0; i < steps.size(); ++i) {
    seq.step(static_cast<int>(i)) << steps[i].first, steps[i].second;
  }
  return seq;
}

std::vector<Point> SequenceSteps(const riskcert::InputSequence& seq) {
  std::vector<Point> out;
  for (int i = 0; i < seq.horizon(); ++i) {
    out.emplace_back(seq.step(i)(0), seq.step(i)(1));
  }
  return out;
}

riskcert::PlanarConfig MakeConfig(int horizon, double radius, Point goal) {
  riskcert::PlanarConfig config;
  config.horizon = horizon;
  config.collision_radius = radius;
  config.goal = {goal.first, goal.second};
  return config;
}

py::dict SolvePlanar(Point start, const std::vector<Point>& obstacles, int n,
                     double epsilon, bool refine, std::uint64_t seed,
                     int horizon, double radius, Point goal) {
  const riskcert::PlanarConfig config = MakeConfig(horizon, radius, goal);
  riskcert::PlanarEnvironment env = MakeEnv(obstacles);
  riskcert::PlanarProblem problem(config, env);
  riskcert::Scenario<riskcert::PlanarEnvironment> scenario;
  scenario.state.coords = Eigen::Vector2d(start.first, start.second);
  scenario.env = env;
  riskcert::PercentileConfig pc;
  pc.n = n;
  pc.epsilon = epsilon;
  pc.refine = refine;
  riskcert::PercentileSolution sol;
  {
    py::gil_scoped_release release;
    sol = riskcert::SolvePercentile(
        problem, scenario, pc, riskcert::Rng(seed, riskcert::kCampaignStream));
  }
  py::dict d;
  d["sequence"] = SequenceSteps(sol.sequence);
  d["cost"] = sol.cost;
  d["refinement_steps"] = sol.refinement_steps;
  d["bound"] = BoundToDict(sol.bound);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Sampling-based percentile certificates for black-box controllers.";

  m.def("confidence", &riskcert::Confidence, py::arg("epsilon"), py::arg("n"),
        "Confidence 1 - (1 - epsilon)^n that the best of n uniform draws lies "
        "in the top epsilon fraction.");
  m.def("required_samples", &riskcert::RequiredSamples, py::arg("epsilon"),
        py::arg("confidence"),
        "Smallest n whose confidence reaches the target.");
  m.def(
      "certify_min",
      [](const std::vector<double>& costs, double epsilon) {
        return BoundToDict(riskcert::CertifyMin(costs, epsilon));
      },
      py::arg("costs"), py::arg("epsilon"));
  m.def(
      "certify_max",
      [](const std::vector<double>& runtimes, double epsilon) {
        return BoundToDict(riskcert::CertifyMax(runtimes, epsilon));
      },
      py::arg("runtimes"), py::arg("epsilon"));

  m.def(
      "planar_cost",
      [](const std::vector<Point>& steps, Point start,
         const std::vector<Point>& obstacles, Point goal) {
        riskcert::PlanarConfig config;
        config.horizon = static_cast<int>(steps.size());
        config.goal = {goal.first, goal.second};
        return riskcert::PlanarCost(MakeSequence(steps),
                                    {start.first, start.second},
                                    MakeEnv(obstacles), config);
      },
      py::arg("steps"), py::arg("start"), py::arg("obstacles") = std::vector<Point>{},
      py::arg("goal") = Point{4.5, 2.0},
      "Terminal distance times 10 plus path length of the waypoint increments.");

  m.def("solve_planar", &SolvePlanar, py::arg("start"),
        py::arg("obstacles") = std::vector<Point>{}, py::arg("n") = 1000,
        py::arg("epsilon") = 0.01, py::arg("refine") = false,
        py::arg("seed") = 0, py::arg("horizon") = 20, py::arg("radius") = 0.3,
        py::arg("goal") = Point{4.5, 2.0},
        "Best of n feasible planar waypoint sequences, optionally refined.");

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::vector<std::string> argv{"riskcert"};
        argv.insert(argv.end(), args.begin(), args.end());
        std::ostringstream out, err;
        int code = 0;
        {
          py::gil_scoped_release release;
          code = riskcert::cli::Run(argv, out, err);
        }
        return std::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"),
      "Run the command-line tool in-process; returns (exit_code, stdout, stderr).");
}
