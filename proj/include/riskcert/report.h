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

#ifndef RISKCERT_REPORT_H_
#define RISKCERT_REPORT_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "riskcert/feasibility.h"
#include "riskcert/guarantees.h"
#include "riskcert/json_util.h"
#include "riskcert/percentile.h"
#include "riskcert/runtime_profiler.h"

namespace riskcert {

inline constexpr char kReportSchema[] = "riskcert/1";

struct ValidationSummary {
  std::int64_t n_validation = 0;
  // Strictly cheaper (percentile), above threshold (runtime), or
  // counterexample fraction (feasibility). Always within [0, 1].
  double fraction_beyond_threshold = 0.0;

  bool operator==(const ValidationSummary&) const = default;
};

struct CampaignReport {
  std::string kind;  // "percentile", "feasibility" or "runtime"
  // Every setting needed to regenerate the records, defaults included.
  Json config;
  std::uint64_t seed = 0;
  bool certified = true;
  std::optional<ConfidenceBound> bound;
  // Kind-specific scalar results.
  Json summary = Json::object();
  Json records = Json::array();
  std::optional<ValidationSummary> validation;
};

Json ReportToJson(const CampaignReport& report);
CampaignReport ReportFromJson(const Json& j);

// Writes FormatJson(ReportToJson(report)). Throws std::runtime_error on I/O
// failure.
void WriteReport(const CampaignReport& report, const std::string& path);
CampaignReport ReadReport(const std::string& path);

// Drops the values that depend on wall-clock measurements so that runtime
// reports from repeated runs can be compared structurally.
Json StripTimingFields(const Json& report);

struct HistogramBin {
  double left = 0.0;
  double right = 0.0;
  std::int64_t count = 0;
};

// n_bins equal-width bins spanning [min, max] of the values; the maximum
// lands in the last bin. A constant sample gets a unit-width range.
std::vector<HistogramBin> ComputeHistogram(std::span<const double> values,
                                           int n_bins);

// CSV with header "bin_left,bin_right,count", one row per bin, then an
// optional marker row "threshold,<value>," for the certificate threshold.
std::string FormatHistogramCsv(std::span<const double> values, int n_bins,
                               std::optional<double> threshold);
void EmitHistogram(std::span<const double> values, int n_bins,
                   std::optional<double> threshold, const std::string& path);

// Record serializers.

template <class Env>
Json RecordToJson(const FeasibilityRecord<Env>& r) {
  Json j;
  j["scenario"] = ScenarioToJson(r.scenario);
  j["now"] = ToString(r.now_status);
  j["next"] = r.successor ? Json(ToString(r.next_status)) : Json(nullptr);
  j["cost_c"] = r.cost_c;
  j["vacuous"] = r.vacuous();
  j["ambiguous"] = r.ambiguous();
  j["controller_failed"] = r.controller_failed;
  j["successor"] = r.successor ? Json(*r.successor) : Json(nullptr);
  j["witness_now"] = r.witness_now ? Json(*r.witness_now) : Json(nullptr);
  j["witness_next"] = r.witness_next ? Json(*r.witness_next) : Json(nullptr);
  return j;
}

template <class Env>
Json RecordToJson(const RuntimeRecord<Env>& r) {
  Json j;
  j["scenario"] = ScenarioToJson(r.scenario);
  j["warmup"] = r.warmup;
  j["infeasible"] = r.infeasible;
  j["wall_seconds"] = r.wall_seconds;
  return j;
}

Json SolutionToJson(const PercentileSolution& solution);

}  // namespace riskcert

#endif  // RISKCERT_REPORT_H_
