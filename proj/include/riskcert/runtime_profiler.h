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

#ifndef RISKCERT_RUNTIME_PROFILER_H_
#define RISKCERT_RUNTIME_PROFILER_H_

#include <chrono>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <vector>

#include "riskcert/core.h"
#include "riskcert/guarantees.h"
#include "riskcert/percentile.h"
#include "riskcert/rng.h"

namespace riskcert {

class Clock {
 public:
  virtual ~Clock() = default;
  // Monotonic time in seconds from an arbitrary origin.
  virtual double NowSeconds() const = 0;
};

class SteadyClock final : public Clock {
 public:
  double NowSeconds() const override {
    using std::chrono::duration;
    using std::chrono::steady_clock;
    return duration<double>(steady_clock::now().time_since_epoch()).count();
  }
};

template <class Env>
struct RuntimeRecord {
  Scenario<Env> scenario;
  double wall_seconds = 0.0;
  bool warmup = false;
  // The solve ended in InfeasibleProblemError or SampleBudgetError. It is
  // still timed: discovering infeasibility is part of the controller query.
  bool infeasible = false;
};

struct RuntimeConfig {
  PercentileConfig controller;
  std::int64_t warmup_count = 5;
  // Serialize timed regions across workers.
  bool strict_timing = true;
  int workers = 1;
};

template <class Env>
struct RuntimeCampaign {
  ConfidenceBound bound;
  // Warmup records first, then the n timed records.
  std::vector<RuntimeRecord<Env>> records;
};

// Wall time of exactly one controller query U(x, d): all rejection sampling,
// cost evaluation and refinement of one SolvePercentile call.
template <class Env>
RuntimeRecord<Env> TimeController(const Problem<Env>& problem,
                                  const Scenario<Env>& scenario,
                                  const PercentileConfig& controller,
                                  const Rng& rng, const Clock& clock,
                                  bool warmup = false) {
  RuntimeRecord<Env> record{.scenario = scenario, .warmup = warmup};
  const double start = clock.NowSeconds();
  try {
    (void)SolvePercentile(problem, scenario, controller, rng);
  } catch (const InfeasibleProblemError&) {
    record.infeasible = true;
  } catch (const SampleBudgetError&) {
    record.infeasible = true;
  }
  const double stop = clock.NowSeconds();
  record.wall_seconds = stop - start;
  if (!std::isfinite(record.wall_seconds) || record.wall_seconds <= 0.0) {
    throw ClockError("clock produced a non-positive duration");
  }
  return record;
}

namespace internal {

template <class Env>
std::vector<RuntimeRecord<Env>> TimeScenarios(const Problem<Env>& problem,
                                              std::int64_t count,
                                              const Rng& rng,
                                              const RuntimeConfig& config,
                                              const Clock& clock, bool warmup) {
  std::vector<std::optional<RuntimeRecord<Env>>> slots(
      static_cast<std::size_t>(count));
  std::mutex timing_mu;
  ParallelFor(slots.size(), config.workers, [&](std::size_t i) {
    const Rng stream = rng.Split(i);
    Rng scenario_rng = stream.Split(0);
    const Scenario<Env> scenario = problem.SampleScenario(scenario_rng);
    PercentileConfig controller = config.controller;
    controller.workers = 1;
    if (config.strict_timing && config.workers > 1) {
      std::lock_guard<std::mutex> lock(timing_mu);
      slots[i] = TimeController(problem, scenario, controller, stream.Split(1),
                                clock, warmup);
    } else {
      slots[i] = TimeController(problem, scenario, controller, stream.Split(1),
                                clock, warmup);
    }
  });
  std::vector<RuntimeRecord<Env>> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(*std::move(s));
  return out;
}

}  // namespace internal

// warmup_count solves on their own substreams, then n timed solves on i.i.d.
// scenarios; the bound is CertifyMax over the n non-warmup runtimes.
template <class Env>
RuntimeCampaign<Env> RunRuntimeCampaign(const Problem<Env>& problem,
                                        std::int64_t n, double epsilon,
                                        const Rng& rng,
                                        const RuntimeConfig& config,
                                        const Clock& clock = SteadyClock()) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (config.warmup_count < 0) {
    throw std::invalid_argument("warmup count must be >= 0");
  }
  config.controller.Validate();
  RuntimeCampaign<Env> campaign;
  campaign.records = internal::TimeScenarios(
      problem, config.warmup_count, rng.Split(0), config, clock, true);
  auto timed =
      internal::TimeScenarios(problem, n, rng.Split(1), config, clock, false);
  std::vector<double> runtimes;
  runtimes.reserve(timed.size());
  for (auto& r : timed) {
    runtimes.push_back(r.wall_seconds);
    campaign.records.push_back(std::move(r));
  }
  campaign.bound = CertifyMax(runtimes, epsilon);
  return campaign;
}

// Runtimes of n fresh timed solves, without warmup.
template <class Env>
std::vector<double> MeasureRuntimes(const Problem<Env>& problem,
                                    std::int64_t n, const Rng& rng,
                                    const RuntimeConfig& config,
                                    const Clock& clock = SteadyClock()) {
  std::vector<double> out;
  for (const auto& r :
       internal::TimeScenarios(problem, n, rng.Split(1), config, clock, false)) {
    out.push_back(r.wall_seconds);
  }
  return out;
}

inline double FractionAbove(const std::vector<double>& values,
                            double threshold) {
  if (values.empty()) return 0.0;
  std::size_t above = 0;
  for (double v : values) {
    if (v > threshold) ++above;
  }
  return static_cast<double>(above) / static_cast<double>(values.size());
}

}  // namespace riskcert

#endif  // RISKCERT_RUNTIME_PROFILER_H_
