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

#ifndef RISKCERT_SELFTEST_H_
#define RISKCERT_SELFTEST_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace riskcert {

struct SelfTestResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

using ConfidenceFn = std::function<double(double epsilon, std::int64_t n)>;

// Checks the confidence arithmetic against an independent route and runs
// the percentile coverage property on an enumerable decision space with an
// exact volume-fraction oracle. `confidence` is injectable so that a broken
// formula can be shown to fail.
std::vector<SelfTestResult> RunSelfTests(std::uint64_t seed,
                                         const ConfidenceFn& confidence = {},
                                         int coverage_trials = 4000);

struct CoverageResult {
  std::int64_t trials = 0;
  std::int64_t covered = 0;   // trials with V(F(z*)) <= epsilon
  double frequency = 0.0;
  double claimed = 0.0;       // confidence(epsilon, n)
  double sigma = 0.0;         // binomial standard deviation of frequency
  bool passed = false;        // frequency >= claimed - 3 sigma
};

// Coverage experiment: `costs` enumerates J over a finite decision space;
// each trial draws n decisions uniformly with replacement, keeps the best,
// and measures its strictly-better fraction exactly.
CoverageResult RunCoverage(const std::vector<double>& costs, std::int64_t n,
                           double epsilon, std::int64_t trials,
                           std::uint64_t seed, double claimed_confidence);

}  // namespace riskcert

#endif  // RISKCERT_SELFTEST_H_
