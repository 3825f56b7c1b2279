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

#include "riskcert/feasibility.h"

#include <string>

namespace riskcert {

std::string_view ToString(WitnessStatus status) {
  switch (status) {
    case WitnessStatus::kWitnessed:
      return "witnessed";
    case WitnessStatus::kNoWitnessFound:
      return "no_witness_found";
    case WitnessStatus::kProvenEmpty:
      return "proven_empty";
  }
  return "unknown";
}

WitnessStatus WitnessStatusFromString(std::string_view name) {
  for (auto s : {WitnessStatus::kWitnessed, WitnessStatus::kNoWitnessFound,
                 WitnessStatus::kProvenEmpty}) {
    if (ToString(s) == name) return s;
  }
  throw std::invalid_argument("unknown witness status: " + std::string(name));
}

}  // namespace riskcert
