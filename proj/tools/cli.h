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

#ifndef RISKCERT_TOOLS_CLI_H_
#define RISKCERT_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace riskcert::cli {

// Stable process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfigError = 1,
  kExitInfeasible = 2,
  kExitCounterexample = 3,
};

// Runs the command line `args` (args[0] is the program name). Reports and
// histograms go to files; `out` receives the report path and a one-line
// summary, `err` receives diagnostics.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace riskcert::cli

#endif  // RISKCERT_TOOLS_CLI_H_
