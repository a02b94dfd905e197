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

#ifndef QHO_SPECTRAL_HPP
#define QHO_SPECTRAL_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qho/model.hpp"

namespace qho {

//============================================================================
// Sector Dirichlet forms
//============================================================================

// Symmetric tridiagonal matrix Q_m of the Dirichlet form restricted to the
// sector spanned by |e_j><e_{j+m}|, j = 0..dim-1, in the coordinates
// y_j = xi_{j, j+m}:
//
//   diag_j = 1/2 [mu^2 (w_j + w_{j+m}) + lam^2 (w_{j+1} + w_{j+m+1})]
//   off_j  = -mu lam sqrt(w_{j+1} w_{j+m+1})
//
// For m >= 1 the form is the exact restriction of the infinite quadratic
// form to vectors supported on 0..dim-1, so its minimum is an upper
// approximation of the sector infimum. For m = 0 the last birth term is
// dropped (reflecting truncation); then v_j = nu^j is an exact null vector.
struct TridiagonalForm {
  std::size_t m = 0;
  std::vector<double> diag;
  std::vector<double> offdiag;

  std::size_t dim() const { return diag.size(); }
  std::vector<double> apply(std::span<const double> y) const;
  double quadratic(std::span<const double> y) const;
};

TridiagonalForm sector_form(const ModelParams& params, std::size_t m,
                            std::size_t dim);

// k-th smallest eigenvalue (k = 0 is the minimum) by Sturm-sequence
// bisection inside the Gershgorin interval, to absolute accuracy tol.
double kth_eig_tridiag(const TridiagonalForm& form, std::size_t k, double tol);
double min_eig_tridiag(const TridiagonalForm& form, double tol);

// Number of eigenvalues strictly below x.
std::size_t sturm_count(const TridiagonalForm& form, double x);

// max_j |(Q_0 v)_j| for v_j = nu^j, relative to max_j diag_j.
double kernel_residual(const TridiagonalForm& form, double nu);

// Minimum of the diagonal-sector form on the complement of the null vector
// v_j ~ nu^j: the second eigenvalue of Q_0, after checking the first is
// zero to 1e-10 (relative to max(1, ||Q_0||_inf)).
double diagonal_gap_numeric(const ModelParams& params, std::size_t dim,
                            double tol);

//============================================================================
// Analytic values and bounds
//============================================================================

// mu^2 m / 2 ((m + r - 1) + nu^2 (m - r + 1)), the exact sector infimum.
double off_diag_analytic(const ModelParams& params, std::size_t m);

// Sector minimizer from y_{j+1} = (nu / theta_j) y_j with
//   theta_j = (w_{j+m+1} + w_{j+1} - w_m) / (2 sqrt(w_{j+m+1} w_{j+1})),
// y_0 = 1, then scaled to unit Euclidean norm.
std::vector<double> off_diag_minimizer(const ModelParams& params,
                                       std::size_t m, std::size_t dim);

// mu^2 / Phi(nu^2, 1, r); mu^2 r at nu = 0.
double diagonal_lower_bound(const ModelParams& params);

// (2 nu^2 + r (1 - nu^2)) Phi(nu^2, 1, r). The off-diagonal minimum is the
// gap when this is at most 2.
double gap_condition(double nu, double r);

struct HardyProfile {
  std::vector<double> values;       // V(u), u = 0..u_max
  std::vector<double> running_sup;  // max_{v<=u} V(v)
  double limit = 0.0;               // Phi(nu^2, 1, r) = lim V(u)
  double supremum = 0.0;            // sup_{u>=0} V(u) = mu^2 B(nu)
  double lower_bound = 0.0;         // mu^2 / supremum
};

// V(u) = ((u + r + 1)/(u + 1)) sum_k nu^{2k} (1/(k + r) - 1/(k + u + 1 + r)).
HardyProfile hardy_profile(const ModelParams& params, std::size_t u_max);
double hardy_value(double nu, double r, double u);

struct UpperBounds {
  double linear = 0.0;  // trial f_j = j - nu^2/(1 - nu^2)
  double lerch = 0.0;   // trial f_j = 1/(j + r) - (1 - nu^2) Phi(nu^2, 1, r)
};

UpperBounds upper_bounds(const ModelParams& params);

//============================================================================
// Gap report and region boundary
//============================================================================

enum class Regime { exact_off_diagonal, undetermined };

std::string to_string(Regime r);

struct GapReport {
  double nu = 0.0;
  double r = 0.0;
  double mu = 0.0;
  std::size_t dim = 0;
  std::size_t m_max = 0;
  std::vector<double> sector_minima_numeric;  // m = 0..m_max
  std::vector<double> off_diag_analytic;      // m = 1..m_max
  double off_diag_gap = 0.0;
  double diagonal_lower = 0.0;
  double diagonal_numeric = 0.0;
  double upper_linear = 0.0;
  double upper_lerch = 0.0;
  double condition_value = 0.0;
  Regime regime = Regime::undetermined;
  // Exact gap in the exact regime; otherwise gap_lower <= gap <= gap_upper.
  double gap_value = 0.0;
  double gap_lower = 0.0;
  double gap_upper = 0.0;
};

GapReport gap_report(const ModelParams& params, std::size_t dim,
                     std::size_t m_max, double tol = 1e-11);

enum class BracketStatus { ok, bracket_extended, bracket_failure };

std::string to_string(BracketStatus s);

struct RegionRow {
  double nu = 0.0;
  double r_star = 0.0;
  double r_sufficient = 0.0;  // 2 nu^2 / (1 - nu^2)
  double r_figure1 = 0.0;     // nu^2 / (1 - nu^2)
  double residual = 0.0;      // |condition(r_star) - 2|
  double condition_lo = 0.0;  // condition at the bracket ends
  double condition_hi = 0.0;
  BracketStatus status = BracketStatus::ok;
};

// Solves gap_condition(nu, r) = 2 for r by bisection for each grid value.
// The bracket starts at [nu^2/(1-nu^2), 2 nu^2/(1-nu^2)]; when the lower
// end does not exceed 2 it is halved until it does (status
// bracket_extended). The condition decreases in r and diverges as r -> 0.
std::vector<RegionRow> region_boundary(std::span<const double> nu_grid,
                                       double tol);

}  // namespace qho

#endif  // QHO_SPECTRAL_HPP
