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

#ifndef RISKCERT_JSON_UTIL_H_
#define RISKCERT_JSON_UTIL_H_

#include <string>

#include <Eigen/Core>

#include "json.hpp"
#include "riskcert/core.h"
#include "riskcert/guarantees.h"

namespace riskcert {

using Json = nlohmann::ordered_json;

Json VectorToJson(const Eigen::VectorXd& v);
Eigen::VectorXd VectorFromJson(const Json& j);
Eigen::Vector2d Vec2FromJson(const Json& j);

void to_json(Json& j, const SystemState& s);
void from_json(const Json& j, SystemState& s);

// Nested array, one inner array per step.
void to_json(Json& j, const InputSequence& seq);
void from_json(const Json& j, InputSequence& seq);

void to_json(Json& j, const ConfidenceBound& b);
void from_json(const Json& j, ConfidenceBound& b);

template <class Env>
Json ScenarioToJson(const Scenario<Env>& s) {
  Json j;
  j["state"] = s.state;
  j["env"] = s.env;
  return j;
}

// Pretty JSON with every floating-point number printed in its shortest
// round-trip form, so that values parse back exactly.
std::string FormatJson(const Json& j, int indent = 2);

// Reads a whole file; throws std::runtime_error when it cannot be opened.
Json ReadJsonFile(const std::string& path);

}  // namespace riskcert

#endif  // RISKCERT_JSON_UTIL_H_
