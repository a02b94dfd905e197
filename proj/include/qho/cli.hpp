// Copyright 2026 The qho Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QHO_CLI_HPP
#define QHO_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace qho::cli {

// Exit statuses.
inline constexpr int kOk = 0;
inline constexpr int kInvalidInput = 1;
inline constexpr int kNumericalFailure = 2;
inline constexpr int kSelfTestFailure = 3;

// Default output directory when --out is absent. Unset means stdout.
inline constexpr const char* kOutputDirEnv = "QHO_OUTPUT_DIR";

// args[0] is the program name. Reports go to --out, else
// $QHO_OUTPUT_DIR/<command>.<ext>, else `out`; the human summary goes to
// `out` unless the report itself does, in which case it goes to `err`.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace qho::cli

#endif  // QHO_CLI_HPP
