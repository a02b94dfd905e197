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

#include "qho/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace qho::io {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

// JSON has no nan; emit null instead.
Json num(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string svg_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

//----------------------------------------------------------------------------
// Header
//----------------------------------------------------------------------------

Header::Header(std::string command, unsigned long long seed) {
  fields_["tool"] = "qho";
  fields_["tool_version"] = kToolVersion;
  fields_["command"] = std::move(command);
  fields_["seed"] = seed;
}

void Header::add(const std::string& key, double value) {
  fields_[key] = num(value);
}

void Header::add(const std::string& key, long long value) {
  fields_[key] = value;
}

void Header::add(const std::string& key, const std::string& value) {
  fields_[key] = value;
}

std::string Header::csv_block() const {
  std::string out;
  for (const auto& [k, v] : fields_.items()) {
    std::string val;
    if (v.is_string()) {
      val = v.get<std::string>();
    } else if (v.is_number_float()) {
      val = format_double(v.get<double>());
    } else if (v.is_null()) {
      val = "nan";
    } else {
      val = v.dump();
    }
    out += "# " + k + ": " + val + "\n";
  }
  return out;
}

//----------------------------------------------------------------------------
// Gap report
//----------------------------------------------------------------------------

namespace {

Json gap_fields(const GapReport& rep) {
  Json j;
  Json minima = Json::array();
  for (double v : rep.sector_minima_numeric) minima.push_back(num(v));
  Json analytic = Json::array();
  for (double v : rep.off_diag_analytic) analytic.push_back(num(v));
  j["sector_minima_numeric"] = minima;
  j["off_diag_analytic"] = analytic;
  j["off_diag_gap"] = num(rep.off_diag_gap);
  j["diagonal_lower"] = num(rep.diagonal_lower);
  j["diagonal_numeric"] = num(rep.diagonal_numeric);
  j["upper_linear"] = num(rep.upper_linear);
  j["upper_lerch"] = num(rep.upper_lerch);
  j["condition_value"] = num(rep.condition_value);
  j["regime"] = to_string(rep.regime);
  j["gap_value"] = num(rep.gap_value);
  j["gap_lower"] = num(rep.gap_lower);
  j["gap_upper"] = num(rep.gap_upper);
  return j;
}

}  // namespace

std::string gap_json(const GapReport& rep, const Header& h) {
  Json j = h.fields();
  const Json body = gap_fields(rep);
  for (const auto& [k, v] : body.items()) j[k] = v;
  return dump(j);
}

std::string gap_csv(const GapReport& rep, const Header& h) {
  std::string out = h.csv_block();
  out += "field,value\n";
  auto row = [&](const std::string& k, double v) {
    out += k + "," + format_double(v) + "\n";
  };
  for (std::size_t m = 0; m < rep.sector_minima_numeric.size(); ++m) {
    row("sector_minima_numeric_" + std::to_string(m),
        rep.sector_minima_numeric[m]);
  }
  for (std::size_t i = 0; i < rep.off_diag_analytic.size(); ++i) {
    row("off_diag_analytic_" + std::to_string(i + 1), rep.off_diag_analytic[i]);
  }
  row("off_diag_gap", rep.off_diag_gap);
  row("diagonal_lower", rep.diagonal_lower);
  row("diagonal_numeric", rep.diagonal_numeric);
  row("upper_linear", rep.upper_linear);
  row("upper_lerch", rep.upper_lerch);
  row("condition_value", rep.condition_value);
  out += "regime," + to_string(rep.regime) + "\n";
  row("gap_value", rep.gap_value);
  row("gap_lower", rep.gap_lower);
  row("gap_upper", rep.gap_upper);
  return out;
}

//----------------------------------------------------------------------------
// Region boundary
//----------------------------------------------------------------------------

std::string region_csv(std::span<const RegionRow> rows, const Header& h) {
  std::string out = h.csv_block();
  out += "nu,r_star,r_sufficient,r_figure1,residual,status\n";
  for (const auto& r : rows) {
    out += format_double(r.nu) + "," + format_double(r.r_star) + "," +
           format_double(r.r_sufficient) + "," + format_double(r.r_figure1) +
           "," + format_double(r.residual) + "," + to_string(r.status) + "\n";
  }
  return out;
}

std::string region_json(std::span<const RegionRow> rows, const Header& h) {
  Json j = h.fields();
  Json arr = Json::array();
  for (const auto& r : rows) {
    Json e;
    e["nu"] = num(r.nu);
    e["r_star"] = num(r.r_star);
    e["r_sufficient"] = num(r.r_sufficient);
    e["r_figure1"] = num(r.r_figure1);
    e["residual"] = num(r.residual);
    e["condition_lo"] = num(r.condition_lo);
    e["condition_hi"] = num(r.condition_hi);
    e["status"] = to_string(r.status);
    arr.push_back(e);
  }
  j["rows"] = arr;
  return dump(j);
}

std::string region_svg(std::span<const RegionRow> rows, const Header& h) {
  const double W = 800.0, H = 600.0;
  const double left = 80.0, right = 30.0, top = 50.0, bottom = 70.0;
  const double pw = W - left - right, ph = H - top - bottom;

  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, ymax = 0.0;
  for (const auto& r : rows) {
    x0 = std::min(x0, r.nu);
    x1 = std::max(x1, r.nu);
    for (double v : {r.r_star, r.r_sufficient, r.r_figure1}) {
      if (std::isfinite(v)) ymax = std::max(ymax, v);
    }
  }
  if (rows.empty() || !(x1 > x0)) {
    x0 = rows.empty() ? 0.0 : x0 - 0.05;
    x1 = rows.empty() ? 1.0 : x1 + 0.05;
  }
  ymax = ymax > 0.0 ? 1.05 * ymax : 1.0;
  auto sx = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
  auto sy = [&](double y) { return top + ph - y / ymax * ph; };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" "
       "height=\"600\" viewBox=\"0 0 800 600\">\n";
  s << "<!-- qho " << kToolVersion << " "
    << h.fields().value("command", std::string()) << " -->\n";
  s << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";

  // Exact regime lies above r*(nu).
  std::string shade;
  for (const auto& r : rows) {
    if (!std::isfinite(r.r_star)) continue;
    shade += svg_num(sx(r.nu)) + "," + svg_num(sy(r.r_star)) + " ";
  }
  if (!shade.empty()) {
    double first = x0, last = x1;
    for (const auto& r : rows) {
      if (std::isfinite(r.r_star)) {
        first = r.nu;
        break;
      }
    }
    for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
      if (std::isfinite(it->r_star)) {
        last = it->nu;
        break;
      }
    }
    shade += svg_num(sx(last)) + "," + svg_num(sy(ymax)) + " " +
             svg_num(sx(first)) + "," + svg_num(sy(ymax));
    s << "<polygon points=\"" << shade
      << "\" fill=\"#cfe3f5\" stroke=\"none\"/>\n";
  }

  // Axes and ticks.
  s << "<line x1=\"" << left << "\" y1=\"" << top + ph << "\" x2=\""
    << left + pw << "\" y2=\"" << top + ph << "\" stroke=\"black\"/>\n";
  s << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left
    << "\" y2=\"" << top + ph << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double xv = x0 + (x1 - x0) * i / 5.0;
    const double yv = ymax * i / 5.0;
    char lab[32];
    std::snprintf(lab, sizeof lab, "%.3g", xv);
    s << "<line x1=\"" << svg_num(sx(xv)) << "\" y1=\"" << top + ph
      << "\" x2=\"" << svg_num(sx(xv)) << "\" y2=\"" << top + ph + 6
      << "\" stroke=\"black\"/>\n";
    s << "<text x=\"" << svg_num(sx(xv)) << "\" y=\"" << top + ph + 22
      << "\" font-size=\"13\" text-anchor=\"middle\">" << lab << "</text>\n";
    std::snprintf(lab, sizeof lab, "%.3g", yv);
    s << "<line x1=\"" << left - 6 << "\" y1=\"" << svg_num(sy(yv))
      << "\" x2=\"" << left << "\" y2=\"" << svg_num(sy(yv))
      << "\" stroke=\"black\"/>\n";
    s << "<text x=\"" << left - 10 << "\" y=\"" << svg_num(sy(yv) + 4)
      << "\" font-size=\"13\" text-anchor=\"end\">" << lab << "</text>\n";
  }
  s << "<text x=\"" << left + pw / 2 << "\" y=\"" << H - 20
    << "\" font-size=\"15\" text-anchor=\"middle\">nu</text>\n";
  s << "<text x=\"22\" y=\"" << top + ph / 2
    << "\" font-size=\"15\" text-anchor=\"middle\" transform=\"rotate(-90 22 "
    << top + ph / 2 << ")\">r</text>\n";

  auto polyline = [&](auto get, const char* color, const char* dash) {
    std::string pts;
    for (const auto& r : rows) {
      const double v = get(r);
      if (!std::isfinite(v)) continue;
      pts += svg_num(sx(r.nu)) + "," + svg_num(sy(v)) + " ";
    }
    s << "<polyline points=\"" << pts << "\" fill=\"none\" stroke=\"" << color
      << "\" stroke-width=\"2\"" << dash << "/>\n";
  };
  polyline([](const RegionRow& r) { return r.r_star; }, "black", "");
  polyline([](const RegionRow& r) { return r.r_sufficient; }, "#1f5fbf",
           " stroke-dasharray=\"8,5\"");
  polyline([](const RegionRow& r) { return r.r_figure1; }, "#c0392b",
           " stroke-dasharray=\"3,4\"");

  const char* labels[3] = {"r*(nu): condition = 2",
                           "2 nu^2/(1-nu^2)", "nu^2/(1-nu^2)"};
  const char* colors[3] = {"black", "#1f5fbf", "#c0392b"};
  for (int i = 0; i < 3; ++i) {
    const double y = top + 18 + 20 * i;
    s << "<line x1=\"" << left + 20 << "\" y1=\"" << y << "\" x2=\""
      << left + 50 << "\" y2=\"" << y << "\" stroke=\"" << colors[i]
      << "\" stroke-width=\"2\"/>\n";
    s << "<text x=\"" << left + 58 << "\" y=\"" << y + 4
      << "\" font-size=\"13\">" << labels[i] << "</text>\n";
  }
  s << "<text x=\"" << left + pw / 2 << "\" y=\"30\" font-size=\"16\" "
       "text-anchor=\"middle\">Exact off-diagonal gap region (shaded)"
       "</text>\n";
  s << "</svg>\n";
  return s.str();
}

//----------------------------------------------------------------------------
// Trajectory
//----------------------------------------------------------------------------

TrajectoryTable tabulate(const Trajectory& traj, const DensityMatrix* reference,
                         std::span<const double> pi, std::size_t diag_columns) {
  TrajectoryTable tab;
  const std::size_t n = traj.times.size();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < n; ++i) {
    const DensityMatrix& s = traj.states[i];
    tab.t.push_back(traj.times[i]);
    if (reference != nullptr) {
      tab.trace_distance.push_back(trace_distance(s, *reference));
      const CMatrix delta = s.matrix() - reference->matrix();
      tab.weighted_hs_norm.push_back(
          weighted_hs_norm(observable_form(delta, pi), pi));
    } else {
      tab.trace_distance.push_back(nan);
      tab.weighted_hs_norm.push_back(nan);
    }
    tab.boundary_occupancy.push_back(traj.boundary_occupancy[i]);
    std::vector<double> d;
    const std::size_t k = std::min(diag_columns, s.dim());
    for (std::size_t j = 0; j < k; ++j) d.push_back(s.matrix()(j, j).real());
    tab.diag.push_back(std::move(d));
  }
  return tab;
}

std::string trajectory_csv(const TrajectoryTable& tab, const Header& h) {
  std::string out = h.csv_block();
  out += "t,trace_distance,weighted_hs_norm,boundary_occupancy";
  const std::size_t k = tab.diag.empty() ? 0 : tab.diag.front().size();
  for (std::size_t j = 0; j < k; ++j) out += ",diag_" + std::to_string(j);
  out += "\n";
  for (std::size_t i = 0; i < tab.t.size(); ++i) {
    out += format_double(tab.t[i]) + "," + format_double(tab.trace_distance[i]) +
           "," + format_double(tab.weighted_hs_norm[i]) + "," +
           format_double(tab.boundary_occupancy[i]);
    for (double v : tab.diag[i]) out += "," + format_double(v);
    out += "\n";
  }
  return out;
}

std::string trajectory_json(const TrajectoryTable& tab, const Header& h) {
  Json j = h.fields();
  auto arr = [](const std::vector<double>& v) {
    Json a = Json::array();
    for (double x : v) a.push_back(num(x));
    return a;
  };
  j["t"] = arr(tab.t);
  j["trace_distance"] = arr(tab.trace_distance);
  j["weighted_hs_norm"] = arr(tab.weighted_hs_norm);
  j["boundary_occupancy"] = arr(tab.boundary_occupancy);
  Json d = Json::array();
  for (const auto& row : tab.diag) d.push_back(arr(row));
  j["diag"] = d;
  return dump(j);
}

//----------------------------------------------------------------------------
// Equivalence
//----------------------------------------------------------------------------

std::string equivalence_json(const EquivalenceReport& rep, const Header& h) {
  Json j = h.fields();
  j["parity"] = to_string(rep.parity);
  j["proportionality_constant"] = num(rep.proportionality_constant);
  j["max_residual"] = num(rep.max_residual);
  j["max_abs_residual"] = num(rep.max_abs_residual);
  j["xi_plus"] = num(rep.xi_plus);
  j["xi_minus"] = num(rep.xi_minus);
  j["probes"] = rep.probes;
  j["convention"] = rep.convention;
  return dump(j);
}

std::string equivalence_csv(const EquivalenceReport& rep, const Header& h) {
  std::string out = h.csv_block();
  out += "field,value\n";
  out += "parity," + to_string(rep.parity) + "\n";
  out += "proportionality_constant," +
         format_double(rep.proportionality_constant) + "\n";
  out += "max_residual," + format_double(rep.max_residual) + "\n";
  out += "max_abs_residual," + format_double(rep.max_abs_residual) + "\n";
  out += "xi_plus," + format_double(rep.xi_plus) + "\n";
  out += "xi_minus," + format_double(rep.xi_minus) + "\n";
  out += "probes," + std::to_string(rep.probes) + "\n";
  out += "convention," + csv_escape(rep.convention) + "\n";
  return out;
}

//----------------------------------------------------------------------------
// Self-test
//----------------------------------------------------------------------------

std::string selftest_text(std::span<const CriterionResult> res) {
  std::string out;
  for (const auto& r : res) out += format_result(r) + "\n";
  return out;
}

std::string selftest_json(std::span<const CriterionResult> res,
                          const Header& h) {
  Json j = h.fields();
  Json arr = Json::array();
  bool ok = true;
  for (const auto& r : res) {
    Json e;
    e["id"] = r.id;
    e["name"] = r.name;
    e["status"] = r.skipped ? "skip" : (r.passed ? "pass" : "fail");
    e["detail"] = r.detail;
    arr.push_back(e);
    ok = ok && r.passed;
  }
  j["criteria"] = arr;
  j["passed"] = ok;
  return dump(j);
}

std::string selftest_csv(std::span<const CriterionResult> res,
                         const Header& h) {
  std::string out = h.csv_block();
  out += "id,name,status,detail\n";
  for (const auto& r : res) {
    out += std::to_string(r.id) + "," + r.name + "," +
           (r.skipped ? "skip" : (r.passed ? "pass" : "fail")) + "," +
           csv_escape(r.detail) + "\n";
  }
  return out;
}

}  // namespace qho::io
