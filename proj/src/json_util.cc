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

#include "riskcert/json_util.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace riskcert {

Json VectorToJson(const Eigen::VectorXd& v) {
  Json j = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v[i]);
  return j;
}

Eigen::VectorXd VectorFromJson(const Json& j) {
  if (!j.is_array()) throw std::invalid_argument("expected a numeric array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

Eigen::Vector2d Vec2FromJson(const Json& j) {
  if (!j.is_array() || j.size() != 2) {
    throw std::invalid_argument("expected a 2-element array");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

void to_json(Json& j, const SystemState& s) { j = VectorToJson(s.coords); }
void from_json(const Json& j, SystemState& s) { s.coords = VectorFromJson(j); }

void to_json(Json& j, const InputSequence& seq) {
  j = Json::array();
  for (int i = 0; i < seq.horizon(); ++i) j.push_back(VectorToJson(seq.step(i)));
}

void from_json(const Json& j, InputSequence& seq) {
  if (!j.is_array() || j.empty() || !j[0].is_array() || j[0].empty()) {
    throw std::invalid_argument("expected a non-empty array of input vectors");
  }
  const int horizon = static_cast<int>(j.size());
  const int dim = static_cast<int>(j[0].size());
  InputSequence out(horizon, dim);
  for (int i = 0; i < horizon; ++i) {
    const Eigen::VectorXd step = VectorFromJson(j[static_cast<std::size_t>(i)]);
    if (step.size() != dim) throw std::invalid_argument("ragged input sequence");
    out.step(i) = step;
  }
  seq = std::move(out);
}

void to_json(Json& j, const ConfidenceBound& b) {
  j = Json{{"kind", ToString(b.kind)},
           {"epsilon", b.epsilon},
           {"n_samples", b.n_samples},
           {"confidence", b.confidence},
           {"threshold", b.threshold}};
}

void from_json(const Json& j, ConfidenceBound& b) {
  b.kind = CertificateKindFromString(j.at("kind").get<std::string>());
  b.epsilon = j.at("epsilon").get<double>();
  b.n_samples = j.at("n_samples").get<std::int64_t>();
  b.confidence = j.at("confidence").get<double>();
  b.threshold = j.at("threshold").get<double>();
}

namespace {

void AppendNumber(std::string& out, double v) {
  if (!std::isfinite(v)) {
    out += "null";
    return;
  }
  // Shortest representation that parses back to the same double.
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  const std::string_view text(buf, static_cast<std::size_t>(end - buf));
  out += text;
  // Keep a marker that the value is floating point.
  if (text.find_first_of(".eE") == std::string_view::npos) out += ".0";
}

void Emit(const Json& j, std::string& out, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        out += Json(it.key()).dump();
        out += ": ";
        Emit(it.value(), out, indent, depth + 1);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Short numeric rows stay on one line.
      bool flat = j.size() <= 4;
      for (const auto& e : j) flat = flat && e.is_number();
      if (flat) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          Emit(j[i], out, indent, depth + 1);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        Emit(j[i], out, indent, depth + 1);
      }
      out += "\n" + close_pad + "]";
      return;
    }
    case Json::value_t::number_float:
      AppendNumber(out, j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

}  // namespace

std::string FormatJson(const Json& j, int indent) {
  std::string out;
  Emit(j, out, indent, 0);
  out += "\n";
  return out;
}

Json ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return Json::parse(buffer.str());
}

}  // namespace riskcert
