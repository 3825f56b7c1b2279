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

#include "riskcert/report.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace riskcert {
namespace {

void WriteFile(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << contents;
  if (!out) throw std::runtime_error("failed writing " + path);
}

std::string Number(double v) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

}  // namespace

Json ReportToJson(const CampaignReport& report) {
  Json j;
  j["schema"] = kReportSchema;
  j["kind"] = report.kind;
  j["seed"] = report.seed;
  j["certified"] = report.certified;
  j["config"] = report.config;
  j["bound"] = report.bound ? Json(*report.bound) : Json(nullptr);
  j["summary"] = report.summary;
  if (report.validation) {
    j["validation"] = Json{
        {"n_validation", report.validation->n_validation},
        {"fraction_beyond_threshold",
         report.validation->fraction_beyond_threshold}};
  } else {
    j["validation"] = nullptr;
  }
  j["records"] = report.records;
  return j;
}

CampaignReport ReportFromJson(const Json& j) {
  if (j.value("schema", std::string()) != kReportSchema) {
    throw std::invalid_argument("unsupported report schema");
  }
  CampaignReport report;
  report.kind = j.at("kind").get<std::string>();
  report.seed = j.at("seed").get<std::uint64_t>();
  report.certified = j.at("certified").get<bool>();
  report.config = j.at("config");
  if (!j.at("bound").is_null()) report.bound = j.at("bound").get<ConfidenceBound>();
  report.summary = j.at("summary");
  if (!j.at("validation").is_null()) {
    const Json& v = j.at("validation");
    report.validation = ValidationSummary{
        v.at("n_validation").get<std::int64_t>(),
        v.at("fraction_beyond_threshold").get<double>()};
    if (!(report.validation->fraction_beyond_threshold >= 0.0 &&
          report.validation->fraction_beyond_threshold <= 1.0)) {
      throw std::invalid_argument("validation fraction outside [0, 1]");
    }
  }
  report.records = j.at("records");
  return report;
}

void WriteReport(const CampaignReport& report, const std::string& path) {
  WriteFile(path, FormatJson(ReportToJson(report)));
}

CampaignReport ReadReport(const std::string& path) {
  return ReportFromJson(ReadJsonFile(path));
}

Json StripTimingFields(const Json& report) {
  Json out = report;
  if (out.value("kind", std::string()) != "runtime") return out;
  if (out["bound"].is_object()) out["bound"].erase("threshold");
  if (out["validation"].is_object()) {
    out["validation"].erase("fraction_beyond_threshold");
  }
  for (auto& key : {"threshold", "median_seconds"}) out["summary"].erase(key);
  for (auto& r : out["records"]) r.erase("wall_seconds");
  return out;
}

std::vector<HistogramBin> ComputeHistogram(std::span<const double> values,
                                           int n_bins) {
  if (values.empty()) throw std::invalid_argument("histogram of no values");
  if (n_bins < 1) throw std::invalid_argument("n_bins must be >= 1");
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  double lo = *lo_it;
  double hi = *hi_it;
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double width = (hi - lo) / n_bins;
  std::vector<HistogramBin> bins(static_cast<std::size_t>(n_bins));
  for (int b = 0; b < n_bins; ++b) {
    bins[static_cast<std::size_t>(b)].left = lo + b * width;
    bins[static_cast<std::size_t>(b)].right =
        b + 1 == n_bins ? hi : lo + (b + 1) * width;
  }
  for (double v : values) {
    int b = static_cast<int>(std::floor((v - lo) / width));
    b = std::clamp(b, 0, n_bins - 1);
    ++bins[static_cast<std::size_t>(b)].count;
  }
  return bins;
}

std::string FormatHistogramCsv(std::span<const double> values, int n_bins,
                               std::optional<double> threshold) {
  std::string csv = "bin_left,bin_right,count\n";
  for (const HistogramBin& bin : ComputeHistogram(values, n_bins)) {
    csv += Number(bin.left) + "," + Number(bin.right) + "," +
           std::to_string(bin.count) + "\n";
  }
  if (threshold) csv += "threshold," + Number(*threshold) + ",\n";
  return csv;
}

void EmitHistogram(std::span<const double> values, int n_bins,
                   std::optional<double> threshold, const std::string& path) {
  WriteFile(path, FormatHistogramCsv(values, n_bins, threshold));
}

Json SolutionToJson(const PercentileSolution& s) {
  Json j;
  j["sequence"] = s.sequence;
  j["sampled_sequence"] = s.sampled_sequence;
  j["cost"] = s.cost;
  j["refined_cost"] = s.refined_cost;
  j["refinement_steps"] = s.refinement_steps;
  j["n_drawn"] = s.n_drawn;
  j["bound"] = s.bound;
  return j;
}

}  // namespace riskcert
