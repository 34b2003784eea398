// Copyright 2026 The csg-solver Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CSG_CLI_H_
#define CSG_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace csg {

inline constexpr const char* kToolVersion = "0.1.0";

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // numerical or solver failure
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitNotConverged = 3;
inline constexpr int kExitInfeasible = 4;

// Runs one command. `args` excludes the program name. The JSON document goes
// to --out when given, else to `out`; messages go to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

std::string sha256_hex(const std::string& bytes);

}  // namespace csg

#endif  // CSG_CLI_H_
