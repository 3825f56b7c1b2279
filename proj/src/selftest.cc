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

#include "riskcert/selftest.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <span>

#include "riskcert/guarantees.h"
#include "riskcert/rng.h"

namespace riskcert {
namespace {

std::string Format(const char* fmt, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), fmt, a, b);
  return buf;
}

// Nonconvex, injective on the grid: many local minima.
std::vector<double> WigglyCosts(int points) {
  std::vector<double> costs(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) {
    const double z = -1.0 + 2.0 * k / (points - 1);
    costs[static_cast<std::size_t>(k)] =
        z * z + 0.3 * std::sin(17.0 * z) + 0.05 * std::cos(61.0 * z) + 1e-9 * k;
  }
  return costs;
}

}  // namespace

CoverageResult RunCoverage(const std::vector<double>& costs, std::int64_t n,
                           double epsilon, std::int64_t trials,
                           std::uint64_t seed, double claimed_confidence) {
  CoverageResult result;
  result.trials = trials;
  result.claimed = claimed_confidence;
  std::vector<int> indices(costs.size());
  for (std::size_t k = 0; k < costs.size(); ++k) indices[k] = static_cast<int>(k);
  const auto cost = [&](int k) { return costs[static_cast<std::size_t>(k)]; };
  const Rng root(seed, kCampaignStream);
  for (std::int64_t t = 0; t < trials; ++t) {
    Rng rng = root.Split(static_cast<std::uint64_t>(t));
    int best = -1;
    for (std::int64_t i = 0; i < n; ++i) {
      const int z = static_cast<int>(rng.UniformInt(costs.size()));
      if (best < 0 || cost(z) < cost(best)) best = z;
    }
    const double fraction = BruteForcePercentile<int>(
        std::span<const int>(indices), cost, best);
    if (fraction <= epsilon) ++result.covered;
  }
  result.frequency =
      static_cast<double>(result.covered) / static_cast<double>(trials);
  const double p = std::clamp(claimed_confidence, 0.0, 1.0);
  result.sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
  result.passed = result.frequency >= claimed_confidence - 3.0 * result.sigma;
  return result;
}

std::vector<SelfTestResult> RunSelfTests(std::uint64_t seed,
                                         const ConfidenceFn& confidence_in,
                                         int coverage_trials) {
  const ConfidenceFn confidence =
      confidence_in ? confidence_in
                    : ConfidenceFn([](double e, std::int64_t n) {
                        return Confidence(e, n);
                      });
  std::vector<SelfTestResult> results;

  {
    // Independent route: repeated multiplication.
    SelfTestResult r{"confidence_matches_product", true, "ok"};
    for (double eps : {0.001, 0.01, 0.05, 0.1, 0.5, 0.9}) {
      double survive = 1.0;
      for (std::int64_t n = 1; n <= 2000; ++n) {
        survive *= 1.0 - eps;
        const double expected = 1.0 - survive;
        const double got = confidence(eps, n);
        if (!(std::abs(got - expected) <= 1e-12)) {
          r.passed = false;
          r.detail = Format("mismatch at epsilon=%g: got %.17g", eps, got);
          break;
        }
      }
      if (!r.passed) break;
    }
    results.push_back(r);
  }

  {
    SelfTestResult r{"required_samples_round_trip", true, "ok"};
    for (double eps : {0.001, 0.005, 0.01, 0.05, 0.1, 0.25, 0.5}) {
      for (double c : {0.9, 0.99, 0.999}) {
        const std::int64_t n = RequiredSamples(eps, c);
        const bool enough = confidence(eps, n) >= c;
        const bool minimal = n == 1 || confidence(eps, n - 1) < c;
        if (!enough || !minimal) {
          r.passed = false;
          r.detail = Format("failed at epsilon=%g, target=%g", eps, c);
        }
      }
    }
    results.push_back(r);
  }

  {
    const std::vector<double> costs = WigglyCosts(1000);
    const std::int64_t n = 20;
    const double eps = 0.05;
    const CoverageResult cov =
        RunCoverage(costs, n, eps, coverage_trials, seed, confidence(eps, n));
    results.push_back(
        {"percentile_coverage", cov.passed,
         Format("empirical %.4f vs claimed %.4f", cov.frequency, cov.claimed)});
  }
  return results;
}

}  // namespace riskcert
