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

#include "riskcert/guarantees.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace riskcert {
namespace {

void CheckEpsilon(double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw std::domain_error("epsilon must lie in [0, 1]");
  }
}

}  // namespace

std::string_view ToString(CertificateKind kind) {
  switch (kind) {
    case CertificateKind::kPercentileOptimality:
      return "PercentileOptimality";
    case CertificateKind::kSuccessiveFeasibility:
      return "SuccessiveFeasibility";
    case CertificateKind::kRuntimeUpperBound:
      return "RuntimeUpperBound";
  }
  return "unknown";
}

CertificateKind CertificateKindFromString(std::string_view name) {
  for (auto kind : {CertificateKind::kPercentileOptimality,
                    CertificateKind::kSuccessiveFeasibility,
                    CertificateKind::kRuntimeUpperBound}) {
    if (ToString(kind) == name) return kind;
  }
  throw std::invalid_argument("unknown certificate kind: " + std::string(name));
}

double Confidence(double epsilon, std::int64_t n) {
  CheckEpsilon(epsilon);
  if (n < 0) throw std::domain_error("sample count must be nonnegative");
  if (n == 0) return 0.0;
  if (epsilon == 1.0) return 1.0;
  return -std::expm1(static_cast<double>(n) * std::log1p(-epsilon));
}

std::int64_t RequiredSamples(double epsilon, double target_confidence) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw std::domain_error("epsilon must lie in (0, 1]");
  }
  if (!(target_confidence >= 0.0 && target_confidence < 1.0)) {
    throw std::domain_error("target confidence must lie in [0, 1)");
  }
  if (epsilon == 1.0 || target_confidence == 0.0) return 1;
  const double estimate =
      std::log1p(-target_confidence) / std::log1p(-epsilon);
  auto n = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(estimate)));
  // The closed form can be off by one after rounding; settle it exactly.
  while (n > 1 && Confidence(epsilon, n - 1) >= target_confidence) --n;
  while (Confidence(epsilon, n) < target_confidence) ++n;
  return n;
}

ConfidenceBound CertifyMin(std::span<const double> costs, double epsilon) {
  if (costs.empty()) throw std::invalid_argument("CertifyMin: no costs");
  const auto n = static_cast<std::int64_t>(costs.size());
  return ConfidenceBound{
      .epsilon = epsilon,
      .n_samples = n,
      .confidence = Confidence(epsilon, n),
      .kind = CertificateKind::kPercentileOptimality,
      .threshold = *std::min_element(costs.begin(), costs.end()),
  };
}

ConfidenceBound CertifyMax(std::span<const double> runtimes, double epsilon) {
  if (runtimes.empty()) throw std::invalid_argument("CertifyMax: no runtimes");
  for (double t : runtimes) {
    if (!(t > 0.0)) {
      throw std::invalid_argument("CertifyMax: runtimes must be positive");
    }
  }
  // max T is min(-T) with the inner inequality flipped.
  const auto n = static_cast<std::int64_t>(runtimes.size());
  return ConfidenceBound{
      .epsilon = epsilon,
      .n_samples = n,
      .confidence = Confidence(epsilon, n),
      .kind = CertificateKind::kRuntimeUpperBound,
      .threshold = *std::max_element(runtimes.begin(), runtimes.end()),
  };
}

}  // namespace riskcert
