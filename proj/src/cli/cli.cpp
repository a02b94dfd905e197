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

#include "qho/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "qho/acceptance.hpp"
#include "qho/dynamics.hpp"
#include "qho/io.hpp"
#include "qho/model.hpp"
#include "qho/operators.hpp"
#include "qho/spectral.hpp"

namespace qho::cli {

namespace {

namespace fs = std::filesystem;

struct Common {
  double nu = 0.5;
  double r = 1.0;
  double mu = 1.0;
  double zeta_plus = 0.0;
  double zeta_minus = 0.0;
  std::size_t dim = 0;
  double tail_tol = 1e-8;
  unsigned long long seed = 12345;
  std::string format;
  std::string out;
  bool svg = false;
  std::size_t m_max = 5;
};

void add_common(CLI::App* app, Common& c, std::size_t default_dim,
                const std::string& default_format,
                std::vector<std::string> formats = {"csv", "json"}) {
  c.dim = default_dim;
  c.format = default_format;
  app->add_option("--nu", c.nu, "lambda/mu")->capture_default_str();
  app->add_option("--r", c.r, "representation parameter r > 0")
      ->capture_default_str();
  app->add_option("--mu", c.mu, "absorption coupling mu")->capture_default_str();
  app->add_option("--zeta-plus", c.zeta_plus, "Hamiltonian coefficient of BB+")
      ->capture_default_str();
  app->add_option("--zeta-minus", c.zeta_minus,
                  "Hamiltonian coefficient of B+B")
      ->capture_default_str();
  app->add_option("--dim", c.dim, "retained Fock levels")->capture_default_str();
  app->add_option("--tail-tol", c.tail_tol, "admissible boundary occupancy")
      ->capture_default_str();
  app->add_option("--seed", c.seed, "seed recorded in the output header")
      ->capture_default_str();
  app->add_option("--format", c.format, "output format")
      ->check(CLI::IsMember(formats))
      ->capture_default_str();
  app->add_option("--out", c.out, "output path (default: $QHO_OUTPUT_DIR or "
                                  "standard output)");
}

io::Header header_for(const std::string& cmd, const Common& c) {
  io::Header h(cmd, c.seed);
  h.add("nu", c.nu);
  h.add("r", c.r);
  h.add("mu", c.mu);
  h.add("lambda", c.nu * c.mu);
  h.add("zeta_plus", c.zeta_plus);
  h.add("zeta_minus", c.zeta_minus);
  h.add("dim", static_cast<long long>(c.dim));
  h.add("tail_tol", c.tail_tol);
  return h;
}

TruncationSpec trunc_of(const Common& c) {
  TruncationSpec t;
  t.dim = c.dim;
  t.tail_tol = c.tail_tol;
  t.validate();
  return t;
}

// Resolved destination; empty path means the `out` stream.
fs::path destination(const std::string& cmd, const std::string& ext,
                     const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir) {
    return fs::path(dir) / (cmd + "." + ext);
  }
  return {};
}

void write_file(const fs::path& p, const std::string& text) {
  if (p.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(p.parent_path(), ec);
  }
  std::ofstream f(p, std::ios::binary);
  if (!f) throw InvalidArgument("cannot open output file " + p.string());
  f << text;
  if (!f) throw InvalidArgument("failed writing " + p.string());
}

// Emits the report and returns the stream for the human summary.
std::ostream& emit(const std::string& cmd, const std::string& ext,
                   const Common& c, const std::string& text, std::ostream& out,
                   std::ostream& err) {
  const fs::path dest = destination(cmd, ext, c.out);
  if (dest.empty()) {
    out << text;
    return err;
  }
  write_file(dest, text);
  out << "wrote " << dest.string() << "\n";
  return out;
}

std::string g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

//----------------------------------------------------------------------------

int cmd_gap(const Common& c, std::ostream& out, std::ostream& err) {
  const auto p = ModelParams::from_nu(c.nu, c.r, c.mu, c.zeta_plus,
                                      c.zeta_minus);
  p.require_invariant_state();
  const GapReport rep = gap_report(p, c.dim, c.m_max);
  io::Header h = header_for("gap", c);
  h.add("m_max", static_cast<long long>(c.m_max));
  const bool json = c.format == "json";
  const std::string text = json ? io::gap_json(rep, h) : io::gap_csv(rep, h);
  std::ostream& s = emit("gap", c.format, c, text, out, err);
  s << "regime: " << to_string(rep.regime);
  if (rep.regime == Regime::exact_off_diagonal) {
    s << "; gap = " << g(rep.gap_value);
  } else {
    s << "; gap in [" << g(rep.gap_lower) << ", " << g(rep.gap_upper) << "]";
  }
  s << "; condition = " << g(rep.condition_value) << "\n";
  return kOk;
}

struct RegionOpts {
  double nu_min = 0.1;
  double nu_max = 0.95;
  std::size_t steps = 50;
  double tol = 1e-8;
};

int cmd_region(const Common& c, const RegionOpts& ro, std::ostream& out,
               std::ostream& err) {
  if (ro.steps < 1) throw InvalidArgument("region: empty grid (--steps < 1)");
  if (!(ro.nu_min > 0.0) || !(ro.nu_max <= 0.999) ||
      (ro.steps > 1 && !(ro.nu_min < ro.nu_max))) {
    throw InvalidArgument("region: need 0 < nu-min < nu-max <= 0.999");
  }
  std::vector<double> grid(ro.steps);
  for (std::size_t i = 0; i < ro.steps; ++i) {
    grid[i] = ro.steps == 1
                  ? ro.nu_min
                  : ro.nu_min + (ro.nu_max - ro.nu_min) *
                                    static_cast<double>(i) /
                                    static_cast<double>(ro.steps - 1);
  }
  const auto rows = region_boundary(grid, ro.tol);

  io::Header h("region", c.seed);
  h.add("nu_min", ro.nu_min);
  h.add("nu_max", ro.nu_max);
  h.add("steps", static_cast<long long>(ro.steps));
  h.add("tol", ro.tol);
  const bool json = c.format == "json";
  const std::string text =
      json ? io::region_json(rows, h) : io::region_csv(rows, h);
  std::ostream& s = emit("region", c.format, c, text, out, err);

  if (c.svg) {
    fs::path sp = destination("region", "svg", c.out);
    if (sp.empty()) {
      sp = "region.svg";
    } else {
      sp.replace_extension(".svg");
    }
    write_file(sp, io::region_svg(rows, h));
    s << "wrote " << sp.string() << "\n";
  }
  std::size_t failures = 0;
  std::size_t extended = 0;
  for (const auto& r : rows) {
    failures += r.status == BracketStatus::bracket_failure;
    extended += r.status == BracketStatus::bracket_extended;
  }
  s << rows.size() << " grid points; " << extended
    << " needed a lower bracket below nu^2/(1-nu^2); " << failures
    << " bracket failures\n";
  return kOk;
}

struct EvolveOpts {
  std::string initial = "basis:0";
  double t_final = 20.0;
  std::optional<double> dt;
  double sample_every = 0.1;
  std::size_t diag_columns = 5;
  bool allow_transient = false;
};

DensityMatrix initial_state(const std::string& spec, const TruncationSpec& tr,
                            double nu) {
  const std::size_t d = tr.dim;
  if (spec == "invariant") {
    if (!(nu < 1.0)) {
      throw InvalidArgument(
          "nu >= 1: the semigroup is transient and has no invariant state");
    }
    return DensityMatrix::diagonal(invariant_diag(nu, tr));
  }
  if (spec.rfind("basis:", 0) == 0) {
    std::size_t k = 0;
    try {
      std::size_t used = 0;
      k = std::stoul(spec.substr(6), &used);
      if (used != spec.size() - 6) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw InvalidArgument("bad initial state '" + spec + "'");
    }
    if (k >= d) throw InvalidArgument("basis index outside the truncation");
    return DensityMatrix::basis(d, k);
  }
  if (spec.rfind("mixture:", 0) == 0) {
    // Lines "k weight"; '#' starts a comment; weights normalized to sum 1.
    const std::string path = spec.substr(8);
    std::ifstream f(path);
    if (!f) throw InvalidArgument("cannot read mixture file " + path);
    std::vector<double> w(d, 0.0);
    std::string line;
    double total = 0.0;
    while (std::getline(f, line)) {
      if (const auto hash = line.find('#'); hash != std::string::npos) {
        line.resize(hash);
      }
      std::istringstream ls(line);
      long long k = 0;
      double v = 0.0;
      if (!(ls >> k)) continue;
      if (!(ls >> v) || k < 0 || static_cast<std::size_t>(k) >= d ||
          !(v >= 0.0) || !std::isfinite(v)) {
        throw InvalidArgument("bad mixture line '" + line + "'");
      }
      w[static_cast<std::size_t>(k)] += v;
      total += v;
    }
    if (!(total > 0.0)) throw InvalidArgument("mixture weights sum to zero");
    for (auto& v : w) v /= total;
    return DensityMatrix::diagonal(w);
  }
  throw InvalidArgument("initial state must be basis:k, invariant or "
                        "mixture:FILE, got '" + spec + "'");
}

int cmd_evolve(const Common& c, const EvolveOpts& eo, std::ostream& out,
               std::ostream& err) {
  const auto p = ModelParams::from_nu(c.nu, c.r, c.mu, c.zeta_plus,
                                      c.zeta_minus);
  const bool has_invariant = p.nu() < 1.0;
  if (!has_invariant && !eo.allow_transient) {
    throw InvalidArgument(
        "nu >= 1: the semigroup is transient and has no invariant state "
        "(pass --allow-transient to integrate anyway)");
  }
  if (!(eo.t_final >= 0.0) || !(eo.sample_every > 0.0)) {
    throw InvalidArgument("evolve: need --t >= 0 and --sample-every > 0");
  }
  const TruncationSpec tr = trunc_of(c);
  const OperatorSet ops = build_operators(p, tr);
  StepControl ctl = StepControl::for_operators(ops);
  if (eo.dt) ctl.dt_max = *eo.dt;
  ctl.validate(ops);

  const DensityMatrix rho0 = initial_state(eo.initial, tr, p.nu());
  const Trajectory traj =
      evolve(ops, rho0, eo.t_final, ctl, eo.sample_every, tr.tail_tol);

  std::vector<double> pi;
  std::optional<DensityMatrix> ref;
  if (has_invariant) {
    pi = invariant_diag(p.nu(), tr);
    ref.emplace(DensityMatrix::diagonal(pi));
  }
  const io::TrajectoryTable tab =
      io::tabulate(traj, ref ? &*ref : nullptr, pi, eo.diag_columns);

  io::Header h = header_for("evolve", c);
  h.add("initial", eo.initial);
  h.add("t_final", eo.t_final);
  h.add("dt", ctl.dt_max);
  h.add("sample_every", eo.sample_every);
  const bool json = c.format == "json";
  const std::string text =
      json ? io::trajectory_json(tab, h) : io::trajectory_csv(tab, h);
  std::ostream& s = emit("evolve", c.format, c, text, out, err);

  s << traj.times.size() << " samples to t = " << g(traj.times.back());
  if (ref) {
    s << "; final trace distance " << g(tab.trace_distance.back());
    try {
      const DecayFit fit = decay_rate(traj, *ref, pi);
      s << "; fitted weighted-norm decay rate " << g(fit.rate) << " (R^2 "
        << g(fit.r_squared) << ")";
    } catch (const NumericalError& e) {
      s << "; decay rate not fitted (" << e.what() << ")";
    }
  }
  s << "\n";
  return kOk;
}

int cmd_equivalence(const Common& c, const std::string& parity_name,
                    const std::optional<double>& r_opt, std::ostream& out,
                    std::ostream& err) {
  const Parity par = parse_parity(parity_name);
  const double r = r_opt ? *r_opt : parity_r(par);
  Common cc = c;
  cc.r = r;
  const auto p = ModelParams::from_nu(c.nu, r, c.mu, c.zeta_plus,
                                      c.zeta_minus);
  const EquivalenceReport rep =
      two_photon_check(p, c.zeta_plus, c.zeta_minus, par, trunc_of(c));
  io::Header h = header_for("equivalence", cc);
  h.add("parity", to_string(par));
  h.add("convention_xi", std::string("xi_plus = zeta_plus, "
                                     "xi_minus = zeta_minus"));
  const bool json = c.format == "json";
  const std::string text =
      json ? io::equivalence_json(rep, h) : io::equivalence_csv(rep, h);
  std::ostream& s = emit("equivalence", c.format, c, text, out, err);
  s << "parity " << to_string(par) << ": constant " << g(rep.proportionality_constant)
    << ", max residual " << g(rep.max_residual) << "\n";
  return kOk;
}

int cmd_selftest(const Common& c, bool quick, bool inject_fault,
                 std::ostream& out, std::ostream& err) {
  AcceptanceOptions opts;
  opts.quick = quick;
  opts.seed = c.seed;
  opts.inject_fault = inject_fault;
  const auto res = run_acceptance(opts);
  const bool ok = all_passed(res);
  io::Header h("selftest", c.seed);
  h.add("quick", std::string(quick ? "true" : "false"));
  h.add("inject_fault", std::string(inject_fault ? "true" : "false"));
  std::string text;
  std::string ext = c.format;
  if (c.format == "json") {
    text = io::selftest_json(res, h);
  } else if (c.format == "csv") {
    text = io::selftest_csv(res, h);
  } else {
    text = io::selftest_text(res);
    ext = "txt";
  }
  std::ostream& s = emit("selftest", ext, c, text, out, err);
  std::size_t failed = 0;
  for (const auto& r : res) failed += !r.passed;
  s << (ok ? "all criteria passed" : std::to_string(failed) +
                                         " criteria failed")
    << "\n";
  return ok ? kOk : kSelfTestFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Quadratic open quantum oscillator: spectral gap, dynamics "
               "and equivalence checks"};
  app.name(args.empty() ? "qho" : args.front());
  app.set_version_flag("--version", std::string(io::kToolVersion));
  app.require_subcommand(1);

  Common gap_c, region_c, evolve_c, eq_c, st_c;

  auto* gap = app.add_subcommand("gap", "spectral gap report");
  add_common(gap, gap_c, 200, "json");
  gap->add_option("--m-max", gap_c.m_max, "largest sector index (>= 3)")
      ->capture_default_str();

  RegionOpts ro;
  auto* region = app.add_subcommand("region", "exact-gap region boundary");
  add_common(region, region_c, 0, "csv");
  region->add_option("--nu-min", ro.nu_min)->capture_default_str();
  region->add_option("--nu-max", ro.nu_max)->capture_default_str();
  region->add_option("--steps", ro.steps)->capture_default_str();
  region->add_option("--tol", ro.tol, "bisection residual tolerance")
      ->capture_default_str();
  region->add_flag("--svg", region_c.svg, "also write an 800x600 SVG plot");

  EvolveOpts eo;
  double dt = 0.0;
  auto* evolve_cmd = app.add_subcommand("evolve", "integrate the master "
                                                  "equation");
  add_common(evolve_cmd, evolve_c, 60, "csv");
  evolve_cmd
      ->add_option("--initial", eo.initial, "basis:k | invariant | mixture:FILE")
      ->capture_default_str();
  evolve_cmd->add_option("--t", eo.t_final, "final time (units of 1/mu^2)")
      ->capture_default_str();
  auto* dt_opt = evolve_cmd->add_option(
      "--dt", dt, "RK4 step (default: the stiffness cap)");
  evolve_cmd->add_option("--sample-every", eo.sample_every)
      ->capture_default_str();
  evolve_cmd->add_option("--diag-columns", eo.diag_columns,
                         "number of diag_k columns")
      ->capture_default_str();
  evolve_cmd->add_flag("--allow-transient", eo.allow_transient,
                       "permit nu >= 1");

  std::string parity;
  auto* eq = app.add_subcommand("equivalence", "two-photon equivalence check");
  add_common(eq, eq_c, 40, "json");
  eq->add_option("--parity", parity, "even | odd")->required();
  // --r omitted: inferred from the parity.

  bool quick = false;
  bool inject = false;
  auto* st = app.add_subcommand("selftest", "run the acceptance suite");
  add_common(st, st_c, 0, "text", {"text", "csv", "json"});
  st->add_flag("--quick", quick, "skip the time-evolution criteria");
  st->add_flag("--inject-fault", inject,
               "mutation fixture: the kernel criterion must fail");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  if (argv.empty()) argv.push_back("qho");
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  }

  try {
    if (gap->parsed()) return cmd_gap(gap_c, out, err);
    if (region->parsed()) return cmd_region(region_c, ro, out, err);
    if (evolve_cmd->parsed()) {
      if (dt_opt->count() > 0) eo.dt = dt;
      return cmd_evolve(evolve_c, eo, out, err);
    }
    if (eq->parsed()) {
      std::optional<double> r_opt;
      if (eq->get_option("--r")->count() > 0) r_opt = eq_c.r;
      return cmd_equivalence(eq_c, parity, r_opt, out, err);
    }
    if (st->parsed()) return cmd_selftest(st_c, quick, inject, out, err);
  } catch (const TruncationOverflow& e) {
    err << "error: " << e.what()
        << "\nthe truncation is too small; increase --dim\n";
    return kNumericalFailure;
  } catch (const NumericalError& e) {
    err << "error: numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kNumericalFailure;
  }
  return kInvalidInput;
}

}  // namespace qho::cli
