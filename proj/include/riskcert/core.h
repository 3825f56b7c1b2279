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

#ifndef RISKCERT_CORE_H_
#define RISKCERT_CORE_H_

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "riskcert/rng.h"

namespace riskcert {

// Maximum rejection-sampling attempts spent on one feasible draw.
inline constexpr int kDefaultRejectionBudget = 100000;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// No feasible input sequence could be drawn at all for a scenario.
class InfeasibleProblemError : public Error {
 public:
  using Error::Error;
};

// The rejection budget ran out after at least one successful draw.
class SampleBudgetError : public Error {
 public:
  using Error::Error;
};

class ClockError : public Error {
 public:
  using Error::Error;
};

struct SystemState {
  Eigen::VectorXd coords;

  int dim() const { return static_cast<int>(coords.size()); }
  bool operator==(const SystemState& other) const {
    return coords.size() == other.coords.size() && coords == other.coords;
  }
};

// H input vectors of equal dimension, stored contiguously step by step so
// that the whole sequence can be treated as one decision vector.
class InputSequence {
 public:
  InputSequence() = default;
  InputSequence(int horizon, int input_dim)
      : horizon_(horizon),
        input_dim_(input_dim),
        values_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(horizon) *
                                      input_dim)) {
    if (horizon <= 0 || input_dim <= 0) {
      throw std::invalid_argument("InputSequence: horizon and dim must be > 0");
    }
  }
  InputSequence(int horizon, int input_dim, Eigen::VectorXd flat)
      : horizon_(horizon), input_dim_(input_dim), values_(std::move(flat)) {
    if (horizon <= 0 || input_dim <= 0 ||
        values_.size() != static_cast<Eigen::Index>(horizon) * input_dim) {
      throw std::invalid_argument("InputSequence: inconsistent dimensions");
    }
  }

  int horizon() const { return horizon_; }
  int input_dim() const { return input_dim_; }

  auto step(int i) const { return values_.segment(i * input_dim_, input_dim_); }
  auto step(int i) { return values_.segment(i * input_dim_, input_dim_); }

  const Eigen::VectorXd& flat() const { return values_; }
  Eigen::VectorXd& flat() { return values_; }

  bool operator==(const InputSequence& other) const {
    return horizon_ == other.horizon_ && input_dim_ == other.input_dim_ &&
           values_ == other.values_;
  }

 private:
  int horizon_ = 0;
  int input_dim_ = 0;
  Eigen::VectorXd values_;
};

// A sampled (x, d) pair.
template <class Env>
struct Scenario {
  SystemState state;
  Env env;
};

// Black-box finite-horizon optimal control problem.
//
// The guarantee procedures only ever talk to an environment through this
// interface: uniform draws from the feasible set U(x, d), cost evaluation,
// membership tests, the closed-loop successor under the deployed controller,
// and uniform scenario draws from X x D.
template <class Env>
class Problem {
 public:
  using Environment = Env;
  using ScenarioType = Scenario<Env>;

  virtual ~Problem() = default;

  // One uniform draw from U(x, d), or nullopt once `budget` rejection
  // attempts have been spent.
  virtual std::optional<InputSequence> SampleFeasible(
      const ScenarioType& scenario, Rng& rng, int budget) const = 0;

  virtual double Cost(const InputSequence& sequence,
                      const ScenarioType& scenario) const = 0;

  virtual bool IsFeasible(const InputSequence& sequence,
                          const ScenarioType& scenario) const = 0;

  // x+ = f(x, U(x, d), d), where U is the controller that executes `plan`.
  virtual SystemState StepClosedLoop(const ScenarioType& scenario,
                                     const InputSequence& plan) const = 0;

  virtual ScenarioType SampleScenario(Rng& rng) const = 0;

  // Analytic gradient of Cost with respect to the flattened sequence, when
  // one exists.
  virtual std::optional<Eigen::VectorXd> CostGradient(
      const InputSequence& /*sequence*/,
      const ScenarioType& /*scenario*/) const {
    return std::nullopt;
  }

  // Projection onto the convex part of the input constraints.
  virtual void ProjectInputs(InputSequence& /*sequence*/) const {}

  // A structured candidate for a feasibility witness, checked by the caller
  // with IsFeasible before it is trusted.
  virtual std::optional<InputSequence> CandidateWitness(
      const ScenarioType& /*scenario*/) const {
    return std::nullopt;
  }

  // True only when U(x, d) is known to be empty.
  virtual bool ProvablyEmpty(const ScenarioType& /*scenario*/) const {
    return false;
  }
};

// Runs fn(i) for i in [0, n) on up to `workers` threads. Each index is
// visited exactly once; callers write results into slot i, so the outcome is
// independent of the worker count. The first exception thrown is rethrown.
template <class Fn>
void ParallelFor(std::size_t n, int workers, Fn&& fn) {
  const std::size_t threads =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::max(workers, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto body = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next = n;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads - 1);
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(body);
  body();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace riskcert

#endif  // RISKCERT_CORE_H_
