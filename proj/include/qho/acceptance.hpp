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

#ifndef QHO_ACCEPTANCE_HPP
#define QHO_ACCEPTANCE_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace qho {

struct AcceptanceOptions {
  // Skips the time-evolution criteria and thins the region grid.
  bool quick = false;
  std::uint64_t seed = 12345;
  // Mutation fixture: flips the sign of the diagonal-sector off-diagonal
  // coefficients before the kernel check, which must then fail.
  bool inject_fault = false;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  bool skipped = false;
  std::string detail;
  double seconds = 0.0;
};

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts);

// "PASS 01 name  detail  (0.012 s)"
std::string format_result(const CriterionResult& r);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace qho

#endif  // QHO_ACCEPTANCE_HPP
