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

#include "qho/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <random>

#include "qho/dynamics.hpp"
#include "qho/model.hpp"
#include "qho/operators.hpp"
#include "qho/oracle.hpp"
#include "qho/spectral.hpp"

namespace qho {

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::string fmt(const char* f, double a, double b, double c) {
  char buf[200];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double trace_norm(const CMatrix& a) {
  return 2.0 * trace_distance(a, CMatrix::Zero(a.rows(), a.cols()));
}

TruncationSpec trunc_of(std::size_t dim) {
  TruncationSpec t;
  t.dim = dim;
  return t;
}

//----------------------------------------------------------------------------

Outcome invariant_fixed_point() {
  const auto p = ModelParams::from_nu(0.5, 1.0);
  const auto tr = trunc_of(60);
  const auto ops = build_operators(p, tr);
  const auto pi = invariant_diag(0.5, tr, true);
  const double norm_res =
      trace_norm(apply_predual(ops, DensityMatrix::diagonal(pi)));

  const auto raw = invariant_diag(0.5, tr, false);
  CMatrix rho_raw = CMatrix::Zero(60, 60);
  for (std::size_t j = 0; j < 60; ++j) rho_raw(j, j) = raw[j];
  const double raw_res = trace_norm(apply_predual(ops, rho_raw));
  const std::size_t n = tr.dim - 1;
  const double lam2 = p.lambda() * p.lambda();
  const double bound = lam2 * std::pow(0.5, 2.0 * n) *
                       (omega(n + 1, p.r()) + omega(n, p.r()));
  return {norm_res <= 1e-13 && raw_res <= bound,
          fmt("normalized residual %.3g; raw residual %.3g <= %.3g", norm_res,
              raw_res, bound)};
}

Outcome exact_gap() {
  const auto p = ModelParams::from_nu(0.5, 1.0, 1.0);
  const double q1 = min_eig_tridiag(sector_form(p, 1, 200), 1e-12);
  const GapReport rep = gap_report(p, 200, 5);
  const bool ok = std::abs(q1 - 0.625) <= 1e-8 &&
                  rep.regime == Regime::exact_off_diagonal &&
                  std::abs(rep.gap_value - 0.625) <= 1e-12 &&
                  std::abs(rep.condition_value - 1.43841) <= 1e-4;
  return {ok, fmt("min eig Q1 %.12g; gap %.12g; condition %.8g", q1,
                  rep.gap_value, rep.condition_value) +
                  " regime " + to_string(rep.regime)};
}

Outcome minimizer_attainment() {
  const auto p = ModelParams::from_nu(0.5, 1.0);
  double worst_rq = 0.0;
  double worst_cf = 0.0;
  for (std::size_t m = 1; m <= 3; ++m) {
    const auto y = off_diag_minimizer(p, m, 200);
    const double rq = sector_form(p, m, 200).quadratic(y);
    worst_rq = std::max(worst_rq, std::abs(rq - off_diag_analytic(p, m)));
    const auto sq = oracle::minimizer_squares(0.5, 1.0, m, 200);
    for (std::size_t j = 0; j < 200; ++j) {
      worst_cf = std::max(worst_cf, std::abs(y[j] * y[j] - sq[j]) / sq[j]);
    }
  }
  return {worst_rq <= 1e-8 && worst_cf <= 1e-10,
          fmt("max |RQ - A_m| %.3g; max relative closed-form deviation %.3g",
              worst_rq, worst_cf)};
}

Outcome sector_minimum_ordering() {
  const double pts[3][2] = {{0.3, 0.5}, {0.5, 1.0}, {0.8, 2.0}};
  bool ok = true;
  double worst = 0.0;
  for (const auto& pt : pts) {
    const auto p = ModelParams::from_nu(pt[0], pt[1]);
    for (std::size_t m = 1; m < 10; ++m) {
      if (!(off_diag_analytic(p, m + 1) > off_diag_analytic(p, m))) ok = false;
    }
    const double nu2 = pt[0] * pt[0];
    const double a1 = 0.5 * (2.0 * nu2 + (1.0 - nu2) * pt[1]);
    const GapReport rep = gap_report(p, 100, 10);
    worst = std::max(worst, std::abs(rep.off_diag_gap - a1));
  }
  return {ok && worst <= 1e-15,
          std::string(ok ? "strictly increasing" : "NOT increasing") +
              fmt(" over m = 1..10; |off_diag_gap - A_1| max %.3g", worst)};
}

Outcome diagonal_sandwich() {
  const auto p = ModelParams::from_nu(0.5, 1.0);
  const double d = diagonal_gap_numeric(p, 200, 1e-12);
  const double lo = diagonal_lower_bound(p);
  const UpperBounds ub = upper_bounds(p);
  const bool ok = d >= 0.868984 - 1e-6 && d <= 1.25 + 1e-6 && lo <= d &&
                  d <= std::min(ub.linear, ub.lerch) + 1e-10;
  return {ok, fmt("%.10g <= %.10g <= %.10g", lo, d,
                  std::min(ub.linear, ub.lerch))};
}

Outcome hardy_profile_check() {
  const double pts[2][2] = {{0.5, 1.0}, {0.8, 0.3}};
  bool ok = true;
  double worst_rel = 0.0;
  double worst_lb = 0.0;
  for (const auto& pt : pts) {
    const auto p = ModelParams::from_nu(pt[0], pt[1]);
    const HardyProfile h = hardy_profile(p, 10000);
    for (std::size_t u = 1; u < h.values.size(); ++u) {
      if (h.values[u] < h.values[u - 1]) ok = false;
    }
    worst_rel =
        std::max(worst_rel, std::abs(h.values.back() - h.limit) / h.limit);
    worst_lb =
        std::max(worst_lb, std::abs(h.lower_bound - diagonal_lower_bound(p)));
  }
  return {ok && worst_rel <= 1e-3 && worst_lb <= 1e-12,
          std::string(ok ? "non-decreasing" : "DECREASES") +
              fmt("; V(1e4) relative gap to limit %.3g; |mu^2/sup V - "
                  "lower bound| %.3g",
                  worst_rel, worst_lb)};
}

Outcome lerch_integral_forms() {
  double worst = 0.0;
  for (double nu : {0.3, 0.5, 0.8}) {
    for (double r : {0.5, 1.0, 2.0}) {
      const double z = nu * nu;
      const double phi = lerch_phi(z, r);
      worst = std::max(worst, std::abs(phi - oracle::lerch_integral(nu, r)));
      // sum z^k (A_k - A_{k+1}) = Phi(z, r) - Phi(z, r + 1)
      const double tele = phi - lerch_phi(z, r + 1.0);
      worst = std::max(worst,
                       std::abs(tele - oracle::telescoped_integral(nu, r)));
    }
  }
  return {worst <= 1e-10, fmt("max deviation %.3g over 9 points", worst)};
}

Outcome small_r_regime() {
  const auto p = ModelParams::from_nu(0.8, 0.05);
  const double d = diagonal_gap_numeric(p, 400, 1e-12);
  const double a1 = off_diag_analytic(p, 1);
  std::vector<double> ub;
  for (double r : {0.2, 0.1, 0.05, 0.01}) {
    ub.push_back(upper_bounds(ModelParams::from_nu(0.5, r)).lerch);
  }
  bool dec = true;
  for (std::size_t i = 1; i < ub.size(); ++i) dec = dec && ub[i] < ub[i - 1];
  return {d < a1 && dec,
          fmt("diagonal %.8g < A_1 %.8g; ", d, a1) +
              fmt("Lerch upper bound %.6g -> %.6g", ub.front(), ub.back())};
}

Outcome region_check(bool quick) {
  const double half = 0.5;
  const RegionRow row = region_boundary(std::span<const double>(&half, 1),
                                        1e-8)
                            .front();
  const std::size_t n = quick ? 10 : 50;
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) {
    grid[i] = 0.1 + 0.85 * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  const auto rows = region_boundary(grid, 1e-8);
  bool mono = true;
  bool refs = true;
  double worst_res = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& rw = rows[i];
    if (rw.status == BracketStatus::bracket_failure) mono = false;
    if (i > 0 && !(rw.r_star > rows[i - 1].r_star)) mono = false;
    const double nu2 = rw.nu * rw.nu;
    refs = refs && std::abs(rw.r_sufficient - 2.0 * nu2 / (1.0 - nu2)) < 1e-15 &&
           std::abs(rw.r_figure1 - nu2 / (1.0 - nu2)) < 1e-15;
    worst_res = std::max(worst_res, rw.residual);
  }
  const bool ok = row.r_star > 1.0 / 3.0 && row.r_star < 2.0 / 3.0 &&
                  row.residual <= 1e-8 && mono && refs && worst_res <= 1e-8;
  return {ok, fmt("r*(0.5) = %.12g, residual %.3g; ", row.r_star,
                  row.residual) +
                  std::to_string(n) + "-point grid " +
                  (mono ? "increasing" : "NOT increasing") +
                  fmt(", max residual %.3g", worst_res)};
}

Outcome dynamics_convergence() {
  const auto p = ModelParams::from_nu(0.5, 1.0);
  const auto tr = trunc_of(60);
  const auto ops = build_operators(p, tr);
  const auto traj = evolve(ops, DensityMatrix::basis(60, 0), 20.0,
                           StepControl::for_operators(ops), 0.5, tr.tail_tol);
  const auto pi = invariant_diag(0.5, tr);
  const double td = trace_distance(traj.states.back(),
                                   DensityMatrix::diagonal(pi));
  const double drift =
      *std::max_element(traj.trace_drift.begin(), traj.trace_drift.end());
  const double min_eig =
      *std::min_element(traj.min_eigenvalue.begin(), traj.min_eigenvalue.end());
  return {td <= 1e-6 && drift <= 1e-10 && min_eig >= -1e-10,
          fmt("final trace distance %.3g; max drift %.3g; min eigenvalue %.3g",
              td, drift, min_eig)};
}

Outcome decay_rate_sharpness() {
  const auto p = ModelParams::from_nu(0.5, 1.0);
  const std::size_t dim = 60;
  const auto tr = trunc_of(dim);
  const auto ops = build_operators(p, tr);
  const auto pi = invariant_diag(0.5, tr);
  const DensityMatrix ref = DensityMatrix::diagonal(pi);
  const auto ctl = StepControl::for_operators(ops);

  // Coherence between neighbouring levels, small enough to stay positive.
  CMatrix rho1 = ref.matrix();
  for (std::size_t j = 0; j < 4; ++j) {
    const double c = 0.005 * std::pow(pi[j] * pi[j + 1], 0.25);
    rho1(j, j + 1) += c;
    rho1(j + 1, j) += c;
  }
  const auto t1 = evolve(ops, DensityMatrix(rho1), 30.0, ctl, 0.25, tr.tail_tol);
  const DecayFit f1 = decay_rate(t1, ref, pi);
  const double q1 = min_eig_tridiag(sector_form(p, 1, dim), 1e-12);

  const auto t0 = evolve(ops, DensityMatrix::basis(dim, 0), 30.0, ctl, 0.25,
                         tr.tail_tol);
  const DecayFit f0 = decay_rate(t0, ref, pi);
  const double lower = diagonal_lower_bound(p);

  const bool ok = std::abs(f1.rate - q1) <= 0.02 * q1 &&
                  f0.rate >= lower * 0.98;
  return {ok, fmt("sector-1 rate %.6g vs %.6g; ", f1.rate, q1) +
                  fmt("diagonal rate %.6g >= %.6g", f0.rate, lower * 0.98)};
}

Outcome support_spread() {
  const auto p = ModelParams::from_nu(0.5, 1.0);
  const auto tr = trunc_of(40);
  const auto ops = build_operators(p, tr);
  const auto traj = evolve(ops, DensityMatrix::basis(40, 5), 0.1,
                           StepControl::for_operators(ops), 0.01, tr.tail_tol);
  bool ok = true;
  double smallest = 1.0;
  int checked = 0;
  for (double t : {0.01, 0.05, 0.1}) {
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
      if (std::abs(traj.times[i] - t) > 1e-9) continue;
      const SupportProfile sp = support_profile(traj.states[i]);
      for (std::size_t k = 0; k <= 10; ++k) {
        smallest = std::min(smallest, sp.diagonal[k]);
        if (!(sp.diagonal[k] > 0.0)) ok = false;
      }
      ++checked;
    }
  }
  return {ok && checked == 3,
          fmt("smallest diagonal entry over indices 0..10: %.3g", smallest) +
              " at " + std::to_string(checked) + " sample times"};
}

Outcome transient_check() {
  double worst0 = 0.0;
  double worst_int = 0.0;
  double worst_or = 0.0;
  bool dec = true;
  for (double r : {0.5, 1.0, 2.0}) {
    const ModelParams p(r, 1.0, 1.0);
    const TransientReport rep = transient_witness(p, 64);
    worst0 = std::max(worst0, std::abs(rep.entry0 + 1.0));
    worst_int = std::max(worst_int, rep.max_interior_residual);
    dec = dec && rep.strictly_decreasing;
    for (std::size_t k = 0; k < 64; ++k) {
      const double o = oracle::transient_tail(k, r);
      worst_or = std::max(worst_or, std::abs(rep.witness[k] - o));
    }
  }
  return {worst0 <= 1e-8 && worst_int <= 1e-8 && dec && worst_or <= 1e-12,
          fmt("|entry0 + 1| %.3g; interior %.3g; tail vs digamma %.3g", worst0,
              worst_int, worst_or)};
}

Outcome two_photon() {
  const auto tr = trunc_of(40);
  bool ok = true;
  std::string detail;
  for (Parity par : {Parity::even, Parity::odd}) {
    const auto p = ModelParams::from_nu(0.5, parity_r(par), 1.0, 0.3, 0.1);
    const EquivalenceReport rep = two_photon_check(p, 0.3, 0.1, par, tr);
    ok = ok && std::abs(rep.proportionality_constant - 4.0) <= 1e-12 &&
         rep.max_residual <= 1e-12 && !rep.convention.empty();
    if (!detail.empty()) detail += "; ";
    detail += to_string(par) + fmt(": c = %.15g, residual %.3g",
                                   rep.proportionality_constant,
                                   rep.max_residual);
  }
  return {ok, detail};
}

Outcome cross_picture() {
  const std::size_t dim = 30;
  double worst = 0.0;
  double worst_corner = 0.0;
  for (int with_h = 0; with_h < 2; ++with_h) {
    const double zp = with_h ? 0.3 : 0.0;
    const double zm = with_h ? 0.1 : 0.0;
    const auto p = ModelParams::from_nu(0.5, 1.0, 1.0, zp, zm);
    const auto tr = trunc_of(dim);
    const auto ops = build_operators(p, tr);
    const auto pi = invariant_diag(0.5, tr);
    for (std::size_t m = 0; m <= 2; ++m) {
      const CMatrix e = embedded_sector_matrix(ops, pi, static_cast<long>(m));
      const std::size_t len = dim - m;
      const TridiagonalForm q = sector_form(p, m, len);
      const double r = p.r();
      for (std::size_t a = 0; a < len; ++a) {
        for (std::size_t b = 0; b < len; ++b) {
          Complex expect = 0.0;
          if (a == b) {
            const double dm = zp * (omega(a + 1, r) - omega(a + m + 1, r)) +
                              zm * (omega(a, r) - omega(a + m, r));
            expect = Complex(-q.diag[a], dm);
          } else if (a + 1 == b) {
            expect = -q.offdiag[a];
          } else if (b + 1 == a) {
            expect = -q.offdiag[b];
          }
          // Embedding round trips cost a few ulps of each entry.
          const double dev =
              std::abs(e(a, b) - expect) / std::max(1.0, std::abs(expect));
          if (m >= 1 && a == len - 1 && b == len - 1) {
            // Reflecting top level: the embedded picture has no birth out
            // of level dim - 1.
            const double lam2 = p.lambda() * p.lambda();
            const double offset = std::abs(e(a, b) - expect);
            worst_corner = std::max(
                worst_corner,
                std::abs(offset - 0.5 * lam2 * omega(dim, r)) /
                    std::abs(expect));
          } else {
            worst = std::max(worst, dev);
          }
        }
      }
    }
  }
  return {worst <= 1e-13 && worst_corner <= 1e-12,
          fmt("max relative entry deviation %.3g; corner offset mismatch %.3g",
              worst, worst_corner)};
}

Outcome kernel_exactness(bool inject_fault) {
  double worst = 0.0;
  const double pts[2][2] = {{0.5, 1.0}, {0.8, 0.05}};
  for (const auto& pt : pts) {
    const auto p = ModelParams::from_nu(pt[0], pt[1]);
    TridiagonalForm q = sector_form(p, 0, pt[0] < 0.6 ? 200 : 400);
    if (inject_fault) {
      for (auto& o : q.offdiag) o = -o;
    }
    worst = std::max(worst, kernel_residual(q, pt[0]));
  }
  return {worst <= 1e-12,
          fmt("max |Q0 v| / max diag = %.3g", worst) +
              (inject_fault ? " (fault injected)" : "")};
}

Outcome adjoint_duality(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  const std::size_t dim = 16;
  const auto p = ModelParams::from_nu(0.5, 1.0, 1.0, 0.3, 0.1);
  const auto ops = build_operators(p, trunc_of(dim));
  auto herm = [&] {
    CMatrix a(dim, dim);
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = 0; j < dim; ++j) a(i, j) = Complex(g(rng), g(rng));
    }
    return CMatrix(0.5 * (a + a.adjoint()));
  };
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const CMatrix rho = herm();
    const CMatrix x = herm();
    const CMatrix lx = apply_generator(ops, x);
    const Complex lhs = (apply_predual(ops, rho) * x).trace();
    const Complex rhs = (rho * lx).trace();
    const double scale = rho.norm() * lx.norm();
    worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, scale));
  }
  return {worst <= 1e-12,
          fmt("max relative duality defect %.3g over 10 random pairs", worst)};
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts) {
  struct Entry {
    int id;
    const char* name;
    bool slow;
    std::function<Outcome()> run;
  };
  const std::vector<Entry> entries = {
      {1, "invariant_fixed_point", false, invariant_fixed_point},
      {2, "exact_gap", false, exact_gap},
      {3, "minimizer_attainment", false, minimizer_attainment},
      {4, "sector_minimum_ordering", false, sector_minimum_ordering},
      {5, "diagonal_sandwich", false, diagonal_sandwich},
      {6, "hardy_profile", false, hardy_profile_check},
      {7, "lerch_integral_forms", false, lerch_integral_forms},
      {8, "small_r_regime", false, small_r_regime},
      {9, "region_boundary", false, [&] { return region_check(opts.quick); }},
      {10, "dynamics_convergence", true, dynamics_convergence},
      {11, "decay_rate_sharpness", true, decay_rate_sharpness},
      {12, "support_spread", false, support_spread},
      {13, "transient_witness", false, transient_check},
      {14, "two_photon_equivalence", false, two_photon},
      {15, "cross_picture_consistency", false, cross_picture},
      {16, "kernel_exactness", false,
       [&] { return kernel_exactness(opts.inject_fault); }},
      {17, "adjoint_duality", false, [&] { return adjoint_duality(opts.seed); }},
  };
  std::vector<CriterionResult> out;
  for (const auto& e : entries) {
    CriterionResult res;
    res.id = e.id;
    res.name = e.name;
    if (opts.quick && e.slow) {
      res.skipped = true;
      res.passed = true;
      res.detail = "skipped in quick mode";
      out.push_back(res);
      continue;
    }
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const Outcome o = e.run();
      res.passed = o.passed;
      res.detail = o.detail;
    } catch (const std::exception& ex) {
      res.passed = false;
      res.detail = std::string("exception: ") + ex.what();
    }
    res.seconds = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    out.push_back(res);
  }
  return out;
}

std::string format_result(const CriterionResult& r) {
  char head[96];
  std::snprintf(head, sizeof head, "%s %02d %-26s ",
                r.skipped ? "SKIP" : (r.passed ? "PASS" : "FAIL"), r.id,
                r.name.c_str());
  char tail[48];
  std::snprintf(tail, sizeof tail, "  (%.3f s)", r.seconds);
  return std::string(head) + r.detail + tail;
}

bool all_passed(const std::vector<CriterionResult>& results) {
  return std::all_of(results.begin(), results.end(),
                     [](const CriterionResult& r) { return r.passed; });
}

}  // namespace qho
