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

#ifndef QHO_IO_HPP
#define QHO_IO_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "qho/acceptance.hpp"
#include "qho/dynamics.hpp"
#include "qho/operators.hpp"
#include "qho/spectral.hpp"

namespace qho::io {

inline constexpr const char* kToolVersion = "0.1.0";

using Json = nlohmann::ordered_json;

// Round-trip decimal: %.17g, with nan/inf spelled as such.
std::string format_double(double v);

// Metadata block written at the top of every output: tool version, command,
// parameter echo, truncation and seed. Insertion order is preserved.
class Header {
 public:
  explicit Header(std::string command, unsigned long long seed);

  void add(const std::string& key, double value);
  void add(const std::string& key, long long value);
  void add(const std::string& key, const std::string& value);

  const Json& fields() const { return fields_; }
  // "# key: value" lines.
  std::string csv_block() const;

 private:
  Json fields_;
};

// Gap report --------------------------------------------------------------

std::string gap_json(const GapReport& rep, const Header& h);
// Long form: "field,value" rows; vectors expand to field_<m>.
std::string gap_csv(const GapReport& rep, const Header& h);

// Region boundary -----------------------------------------------------------

std::string region_csv(std::span<const RegionRow> rows, const Header& h);
std::string region_json(std::span<const RegionRow> rows, const Header& h);
// 800x600 static plot of the three curves with the exact region shaded.
std::string region_svg(std::span<const RegionRow> rows, const Header& h);

// Trajectory ----------------------------------------------------------------

struct TrajectoryTable {
  std::vector<double> t;
  std::vector<double> trace_distance;    // nan when there is no reference
  std::vector<double> weighted_hs_norm;  // of the observable form
  std::vector<double> boundary_occupancy;
  std::vector<std::vector<double>> diag;  // diag[i][k], k < diag_columns
};

// reference and pi may be absent (empty pi) when no invariant state exists.
TrajectoryTable tabulate(const Trajectory& traj, const DensityMatrix* reference,
                         std::span<const double> pi, std::size_t diag_columns);

std::string trajectory_csv(const TrajectoryTable& tab, const Header& h);
std::string trajectory_json(const TrajectoryTable& tab, const Header& h);

// Two-photon equivalence ----------------------------------------------------

std::string equivalence_json(const EquivalenceReport& rep, const Header& h);
std::string equivalence_csv(const EquivalenceReport& rep, const Header& h);

// Self-test -----------------------------------------------------------------

std::string selftest_text(std::span<const CriterionResult> res);
std::string selftest_json(std::span<const CriterionResult> res,
                          const Header& h);
std::string selftest_csv(std::span<const CriterionResult> res,
                         const Header& h);

}  // namespace qho::io

#endif  // QHO_IO_HPP
