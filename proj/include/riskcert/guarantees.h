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

#ifndef RISKCERT_GUARANTEES_H_
#define RISKCERT_GUARANTEES_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace riskcert {

enum class CertificateKind {
  kPercentileOptimality,
  kSuccessiveFeasibility,
  kRuntimeUpperBound,
};

std::string_view ToString(CertificateKind kind);
CertificateKind CertificateKindFromString(std::string_view name);

// A distribution-free statement about N i.i.d. samples: with confidence
// `confidence`, a fresh sample lands on the right side of `threshold` with
// probability at least 1 - epsilon.
struct ConfidenceBound {
  double epsilon = 0.0;
  std::int64_t n_samples = 0;
  double confidence = 0.0;
  CertificateKind kind = CertificateKind::kPercentileOptimality;
  // Extremal sampled value: the minimum cost, or the maximum runtime.
  double threshold = 0.0;

  bool operator==(const ConfidenceBound&) const = default;
};

// 1 - (1 - epsilon)^n, evaluated as -expm1(n * log1p(-epsilon)).
// Throws std::domain_error unless 0 <= epsilon <= 1 and n >= 0.
double Confidence(double epsilon, std::int64_t n);

// Smallest n >= 1 with Confidence(epsilon, n) >= target_confidence.
// Requires 0 < epsilon <= 1 and 0 <= target_confidence < 1.
std::int64_t RequiredSamples(double epsilon, double target_confidence);

// Percentile certificate from sampled costs: threshold = min(costs).
ConfidenceBound CertifyMin(std::span<const double> costs, double epsilon);

// Runtime certificate: threshold = max(runtimes). All runtimes must be > 0.
ConfidenceBound CertifyMax(std::span<const double> runtimes, double epsilon);

// Exact volume fraction of the strictly-better set on an enumerable decision
// space: |{z : cost(z) < cost(candidate)}| / |decisions|.
template <class Decision, class CostFn>
double BruteForcePercentile(std::span<const Decision> decisions,
                            CostFn&& cost, const Decision& candidate) {
  if (decisions.empty()) return 0.0;
  const double reference = cost(candidate);
  std::size_t better = 0;
  for (const Decision& z : decisions) {
    if (cost(z) < reference) ++better;
  }
  return static_cast<double>(better) / static_cast<double>(decisions.size());
}

}  // namespace riskcert

#endif  // RISKCERT_GUARANTEES_H_
