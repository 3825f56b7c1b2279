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

#ifndef RISKCERT_TESTS_TEST_PROBLEMS_H_
#define RISKCERT_TESTS_TEST_PROBLEMS_H_

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "riskcert/core.h"
#include "riskcert/rng.h"

namespace riskcert::testing {

struct NoEnv {};

// Decision space {0, ..., M-1}; a decision is a 1x1 sequence holding the
// index. Cost values are supplied by the caller, so the exact strictly-better
// fraction of any decision is known.
class EnumerableProblem final : public Problem<NoEnv> {
 public:
  explicit EnumerableProblem(std::vector<double> costs)
      : costs_(std::move(costs)) {}

  const std::vector<double>& costs() const { return costs_; }
  static int Index(const InputSequence& s) {
    return static_cast<int>(s.flat()[0]);
  }

  std::optional<InputSequence> SampleFeasible(const ScenarioType&, Rng& rng,
                                              int) const override {
    InputSequence s(1, 1);
    s.flat()[0] = static_cast<double>(rng.UniformInt(costs_.size()));
    return s;
  }
  double Cost(const InputSequence& s, const ScenarioType&) const override {
    return costs_[static_cast<std::size_t>(Index(s))];
  }
  bool IsFeasible(const InputSequence& s, const ScenarioType&) const override {
    const double v = s.flat()[0];
    return v >= 0 && v < static_cast<double>(costs_.size()) &&
           v == std::floor(v);
  }
  SystemState StepClosedLoop(const ScenarioType& sc,
                             const InputSequence&) const override {
    return sc.state;
  }
  ScenarioType SampleScenario(Rng&) const override {
    return {SystemState{Eigen::VectorXd::Zero(1)}, NoEnv{}};
  }

 private:
  std::vector<double> costs_;
};

// A nonconvex cost on a discretized interval with many local minima and
// repeated values.
inline std::vector<double> WigglyCosts(int m) {
  std::vector<double> c(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    const double u = -1.0 + 2.0 * k / (m - 1);
    c[static_cast<std::size_t>(k)] =
        std::round(1e6 * (u * u + 0.3 * std::sin(17.0 * u) +
                          0.1 * std::cos(53.0 * u))) / 1e6;
  }
  return c;
}

// J(u) = (u - c)^T Q (u - c) over the box [-1, 1]^d.
class BoxQuadratic final : public Problem<NoEnv> {
 public:
  BoxQuadratic(Eigen::MatrixXd q, Eigen::VectorXd c)
      : q_(std::move(q)), c_(std::move(c)) {}

  int dim() const { return static_cast<int>(c_.size()); }
  const Eigen::MatrixXd& q() const { return q_; }
  const Eigen::VectorXd& c() const { return c_; }

  std::optional<InputSequence> SampleFeasible(const ScenarioType&, Rng& rng,
                                              int) const override {
    InputSequence s(1, dim());
    for (int k = 0; k < dim(); ++k) s.flat()[k] = rng.Uniform(-1.0, 1.0);
    return s;
  }
  double Cost(const InputSequence& s, const ScenarioType&) const override {
    const Eigen::VectorXd d = s.flat() - c_;
    return d.dot(q_ * d);
  }
  bool IsFeasible(const InputSequence& s, const ScenarioType&) const override {
    return s.flat().cwiseAbs().maxCoeff() <= 1.0;
  }
  SystemState StepClosedLoop(const ScenarioType& sc,
                             const InputSequence&) const override {
    return sc.state;
  }
  ScenarioType SampleScenario(Rng&) const override {
    return {SystemState{Eigen::VectorXd::Zero(1)}, NoEnv{}};
  }
  std::optional<Eigen::VectorXd> CostGradient(
      const InputSequence& s, const ScenarioType&) const override {
    return Eigen::VectorXd(2.0 * q_ * (s.flat() - c_));
  }
  void ProjectInputs(InputSequence& s) const override {
    s.flat() = s.flat().cwiseMax(-1.0).cwiseMin(1.0);
  }

 private:
  Eigen::MatrixXd q_;
  Eigen::VectorXd c_;
};

inline Scenario<NoEnv> EmptyScenario() {
  return {SystemState{Eigen::VectorXd::Zero(1)}, NoEnv{}};
}

inline std::string DataPath(const std::string& name) {
  const char* dir = std::getenv("RISKCERT_DATA_DIR");
  return (std::filesystem::path(dir ? dir : "data") / name).string();
}

// Pearson chi-square statistic for counts against a uniform expectation.
inline double ChiSquareUniform(const std::vector<std::int64_t>& counts) {
  std::int64_t total = 0;
  for (auto c : counts) total += c;
  const double expected = static_cast<double>(total) / counts.size();
  double chi2 = 0.0;
  for (auto c : counts) {
    const double d = static_cast<double>(c) - expected;
    chi2 += d * d / expected;
  }
  return chi2;
}

// Upper 0.001 quantile of chi-square with 15 degrees of freedom.
inline constexpr double kChiSquare15Critical = 37.697;

}  // namespace riskcert::testing

#endif  // RISKCERT_TESTS_TEST_PROBLEMS_H_
