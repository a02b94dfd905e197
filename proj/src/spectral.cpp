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

#include "qho/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qho {

namespace {

void require_open_unit_nu(const ModelParams& params, const char* what) {
  const double nu = params.nu();
  if (!(nu > 0.0) || !(nu < 1.0)) {
    throw InvalidArgument(std::string(what) + ": nu must lie in (0, 1)");
  }
}

// Sums terms t(k) for k = 0, 1, ... until bound(k) <= tol, smallest last.
template <typename Term, typename Bound>
double geometric_series(Term term, Bound bound, double tol) {
  std::vector<double> terms;
  for (std::size_t k = 0; k < 100000000; ++k) {
    if (k > 0 && bound(k) <= tol) break;
    terms.push_back(term(k));
  }
  double s = 0.0;
  for (auto it = terms.rbegin(); it != terms.rend(); ++it) s += *it;
  return s;
}

}  // namespace

//----------------------------------------------------------------------------
// TridiagonalForm
//----------------------------------------------------------------------------

std::vector<double> TridiagonalForm::apply(std::span<const double> y) const {
  const std::size_t n = diag.size();
  if (y.size() != n) {
    throw InvalidArgument("TridiagonalForm::apply: length mismatch");
  }
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    double v = diag[j] * y[j];
    if (j > 0) v += offdiag[j - 1] * y[j - 1];
    if (j + 1 < n) v += offdiag[j] * y[j + 1];
    out[j] = v;
  }
  return out;
}

double TridiagonalForm::quadratic(std::span<const double> y) const {
  const std::vector<double> qy = apply(y);
  double s = 0.0;
  for (std::size_t j = 0; j < y.size(); ++j) s += y[j] * qy[j];
  return s;
}

TridiagonalForm sector_form(const ModelParams& params, std::size_t m,
                            std::size_t dim) {
  if (dim < 4) {
    throw InvalidArgument("sector_form requires dim >= 4");
  }
  const double r = params.r();
  const double mu = params.mu();
  const double lam = params.lambda();
  const double mu2 = mu * mu;
  const double lam2 = lam * lam;
  TridiagonalForm q;
  q.m = m;
  q.diag.resize(dim);
  q.offdiag.resize(dim - 1);
  for (std::size_t j = 0; j < dim; ++j) {
    if (m == 0) {
      const double birth = j + 1 < dim ? omega(j + 1, r) : 0.0;
      q.diag[j] = mu2 * omega(j, r) + lam2 * birth;
    } else {
      q.diag[j] = 0.5 * (mu2 * (omega(j, r) + omega(j + m, r)) +
                         lam2 * (omega(j + 1, r) + omega(j + m + 1, r)));
    }
  }
  for (std::size_t j = 0; j + 1 < dim; ++j) {
    q.offdiag[j] = -mu * lam * std::sqrt(omega(j + 1, r) * omega(j + m + 1, r));
  }
  return q;
}

std::size_t sturm_count(const TridiagonalForm& form, double x) {
  const std::size_t n = form.diag.size();
  double scale = 0.0;
  for (double d : form.diag) scale = std::max(scale, std::abs(d));
  for (double b : form.offdiag) scale = std::max(scale, std::abs(b));
  const double pivmin =
      std::numeric_limits<double>::min() * std::max(1.0, scale * scale);
  std::size_t count = 0;
  double d = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double b2 = i > 0 ? form.offdiag[i - 1] * form.offdiag[i - 1] : 0.0;
    d = (form.diag[i] - x) - (i > 0 ? b2 / d : 0.0);
    if (std::abs(d) < pivmin) d = -pivmin;
    if (d < 0.0) ++count;
  }
  return count;
}

double kth_eig_tridiag(const TridiagonalForm& form, std::size_t k, double tol) {
  const std::size_t n = form.diag.size();
  if (n == 0 || form.offdiag.size() + 1 != n) {
    throw InvalidArgument("kth_eig_tridiag: malformed tridiagonal form");
  }
  if (k >= n) {
    throw InvalidArgument("kth_eig_tridiag: eigenvalue index out of range");
  }
  if (!(tol > 0.0)) {
    throw InvalidArgument("kth_eig_tridiag: tol must be positive");
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < n; ++i) {
    double radius = 0.0;
    if (i > 0) radius += std::abs(form.offdiag[i - 1]);
    if (i + 1 < n) radius += std::abs(form.offdiag[i]);
    lo = std::min(lo, form.diag[i] - radius);
    hi = std::max(hi, form.diag[i] + radius);
  }
  const double pad = 1e-14 * std::max({1.0, std::abs(lo), std::abs(hi)});
  lo -= pad;
  hi += pad;
  // Invariant: count(lo) <= k < count(hi).
  for (int it = 0; it < 400 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (sturm_count(form, mid) > k) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double min_eig_tridiag(const TridiagonalForm& form, double tol) {
  return kth_eig_tridiag(form, 0, tol);
}

double kernel_residual(const TridiagonalForm& form, double nu) {
  const std::size_t n = form.diag.size();
  std::vector<double> v(n);
  double p = 1.0;
  for (auto& x : v) {
    x = p;
    p *= nu;
  }
  const std::vector<double> qv = form.apply(v);
  double worst = 0.0;
  double scale = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    worst = std::max(worst, std::abs(qv[j]));
    scale = std::max(scale, std::abs(form.diag[j]));
  }
  return scale > 0.0 ? worst / scale : worst;
}

double diagonal_gap_numeric(const ModelParams& params, std::size_t dim,
                            double tol) {
  params.require_invariant_state();
  const TridiagonalForm q0 = sector_form(params, 0, dim);
  double norm = 1.0;
  for (std::size_t i = 0; i < dim; ++i) {
    double row = std::abs(q0.diag[i]);
    if (i > 0) row += std::abs(q0.offdiag[i - 1]);
    if (i + 1 < dim) row += std::abs(q0.offdiag[i]);
    norm = std::max(norm, row);
  }
  const double kernel = kth_eig_tridiag(q0, 0, tol);
  if (std::abs(kernel) > 1e-10 * norm) {
    throw NumericalError("diagonal sector: lowest eigenvalue " +
                         std::to_string(kernel) +
                         " is not the expected null eigenvalue");
  }
  return kth_eig_tridiag(q0, 1, tol);
}

//----------------------------------------------------------------------------
// Analytic values and bounds
//----------------------------------------------------------------------------

double off_diag_analytic(const ModelParams& params, std::size_t m) {
  if (m == 0) {
    throw InvalidArgument(
        "off_diag_analytic: m = 0 is the diagonal sector (no closed form)");
  }
  const double md = static_cast<double>(m);
  const double r = params.r();
  const double nu2 = params.nu() * params.nu();
  const double mu2 = params.mu() * params.mu();
  return 0.5 * mu2 * md * ((md + r - 1.0) + nu2 * (md - r + 1.0));
}

std::vector<double> off_diag_minimizer(const ModelParams& params,
                                       std::size_t m, std::size_t dim) {
  params.require_invariant_state();
  if (m == 0) {
    throw InvalidArgument("off_diag_minimizer requires m >= 1");
  }
  if (dim < 1) {
    throw InvalidArgument("off_diag_minimizer requires dim >= 1");
  }
  const double r = params.r();
  const double nu = params.nu();
  const double wm = omega(m, r);
  std::vector<double> y(dim);
  y[0] = 1.0;
  for (std::size_t j = 0; j + 1 < dim; ++j) {
    const double a = omega(j + m + 1, r);
    const double b = omega(j + 1, r);
    const double theta = (a + b - wm) / (2.0 * std::sqrt(a * b));
    y[j + 1] = (nu / theta) * y[j];
  }
  double norm2 = 0.0;
  for (std::size_t j = dim; j-- > 0;) norm2 += y[j] * y[j];
  const double inv = 1.0 / std::sqrt(norm2);
  for (auto& v : y) v *= inv;
  return y;
}

double diagonal_lower_bound(const ModelParams& params) {
  const double nu = params.nu();
  if (!(nu >= 0.0) || !(nu < 1.0)) {
    throw InvalidArgument("diagonal_lower_bound: nu must lie in [0, 1)");
  }
  const double mu2 = params.mu() * params.mu();
  if (nu == 0.0) return mu2 * params.r();
  return mu2 / lerch_phi(nu * nu, params.r());
}

double gap_condition(double nu, double r) {
  const double nu2 = nu * nu;
  return (2.0 * nu2 + r * (1.0 - nu2)) * lerch_phi(nu2, r);
}

double hardy_value(double nu, double r, double u) {
  // (u + r + 1) sum_k z^k / ((k + r)(k + u + 1 + r)); no cancellation.
  const double z = nu * nu;
  const double c = u + 1.0 + r;
  if (z == 0.0) return c / (r * c);
  const double one_minus_z = 1.0 - z;
  auto term = [&](std::size_t k) {
    const double kd = static_cast<double>(k);
    return std::pow(z, kd) / ((kd + r) * (kd + c));
  };
  auto bound = [&](std::size_t k) {
    const double kd = static_cast<double>(k);
    return std::pow(z, kd) / ((kd + r) * (kd + c) * one_minus_z);
  };
  const double s = geometric_series(term, bound, 1e-17 / c);
  return c * s;
}

HardyProfile hardy_profile(const ModelParams& params, std::size_t u_max) {
  if (u_max < 10) {
    throw InvalidArgument("hardy_profile requires u_max >= 10");
  }
  const double nu = params.nu();
  if (!(nu >= 0.0) || !(nu < 1.0)) {
    throw InvalidArgument("hardy_profile: nu must lie in [0, 1)");
  }
  const double r = params.r();
  HardyProfile prof;
  prof.values.resize(u_max + 1);
  prof.running_sup.resize(u_max + 1);
  double sup = -std::numeric_limits<double>::infinity();
  for (std::size_t u = 0; u <= u_max; ++u) {
    prof.values[u] = hardy_value(nu, r, static_cast<double>(u));
    sup = std::max(sup, prof.values[u]);
    prof.running_sup[u] = sup;
  }
  prof.limit = lerch_phi(nu * nu, r);
  // V increases to its limit, so the supremum over u >= 0 is the limit.
  prof.supremum = std::max(prof.limit, sup);
  prof.lower_bound = params.mu() * params.mu() / prof.supremum;
  return prof;
}

UpperBounds upper_bounds(const ModelParams& params) {
  require_open_unit_nu(params, "upper_bounds");
  const double nu = params.nu();
  const double z = nu * nu;
  const double r = params.r();
  const double mu2 = params.mu() * params.mu();
  const double lam2 = params.lambda() * params.lambda();
  UpperBounds ub;
  ub.linear = mu2 * (2.0 * z + r * (1.0 - z));

  const double tol = 1e-12;
  const double one_minus_z = 1.0 - z;
  const double c = one_minus_z * lerch_phi(z, r);
  // (j + 1)/((j + r + 1)^2 (j + r)) <= 1/(r (r + 1)) for all j >= 0.
  const double s1_scale = 1.0 / (r * std::min(1.0, r + 1.0));
  const double s1 = geometric_series(
      [&](std::size_t j) {
        const double jd = static_cast<double>(j);
        return (jd + 1.0) * std::pow(z, jd) /
               ((jd + r + 1.0) * (jd + r + 1.0) * (jd + r));
      },
      [&](std::size_t j) {
        return s1_scale * std::pow(z, static_cast<double>(j)) / one_minus_z;
      },
      tol);
  const double s2_scale = std::max(1.0 / (r * r), c * c);
  const double s2 = geometric_series(
      [&](std::size_t j) {
        const double jd = static_cast<double>(j);
        const double f = 1.0 / (jd + r) - c;
        return f * f * std::pow(z, jd);
      },
      [&](std::size_t j) {
        return s2_scale * std::pow(z, static_cast<double>(j)) / one_minus_z;
      },
      tol);
  ub.lerch = lam2 * s1 / s2;
  return ub;
}

//----------------------------------------------------------------------------
// Gap report and region boundary
//----------------------------------------------------------------------------

std::string to_string(Regime r) {
  return r == Regime::exact_off_diagonal ? "exact" : "undetermined";
}

GapReport gap_report(const ModelParams& params, std::size_t dim,
                     std::size_t m_max, double tol) {
  require_open_unit_nu(params, "gap_report");
  if (m_max < 3) {
    throw InvalidArgument("gap_report requires m_max >= 3");
  }
  GapReport rep;
  rep.nu = params.nu();
  rep.r = params.r();
  rep.mu = params.mu();
  rep.dim = dim;
  rep.m_max = m_max;

  rep.diagonal_numeric = diagonal_gap_numeric(params, dim, tol);
  rep.sector_minima_numeric.push_back(rep.diagonal_numeric);
  for (std::size_t m = 1; m <= m_max; ++m) {
    rep.sector_minima_numeric.push_back(
        min_eig_tridiag(sector_form(params, m, dim), tol));
    rep.off_diag_analytic.push_back(off_diag_analytic(params, m));
  }
  rep.off_diag_gap = *std::min_element(rep.off_diag_analytic.begin(),
                                       rep.off_diag_analytic.end());
  rep.diagonal_lower = diagonal_lower_bound(params);
  const UpperBounds ub = upper_bounds(params);
  rep.upper_linear = ub.linear;
  rep.upper_lerch = ub.lerch;
  rep.condition_value = gap_condition(rep.nu, rep.r);

  const double numeric_min = *std::min_element(
      rep.sector_minima_numeric.begin(), rep.sector_minima_numeric.end());
  if (rep.condition_value <= 2.0) {
    rep.regime = Regime::exact_off_diagonal;
    rep.gap_value = 0.5 * params.mu() * params.mu() *
                    (2.0 * rep.nu * rep.nu + rep.r * (1.0 - rep.nu * rep.nu));
    rep.gap_lower = rep.gap_value;
    rep.gap_upper = rep.gap_value;
  } else {
    rep.regime = Regime::undetermined;
    rep.gap_lower = std::min(rep.diagonal_lower, rep.off_diag_gap);
    rep.gap_upper = numeric_min;
    rep.gap_value = std::numeric_limits<double>::quiet_NaN();
  }
  return rep;
}

std::string to_string(BracketStatus s) {
  switch (s) {
    case BracketStatus::ok:
      return "ok";
    case BracketStatus::bracket_extended:
      return "bracket_extended";
    case BracketStatus::bracket_failure:
      return "bracket_failure";
  }
  return "unknown";
}

std::vector<RegionRow> region_boundary(std::span<const double> nu_grid,
                                       double tol) {
  if (!(tol > 0.0)) {
    throw InvalidArgument("region_boundary: tol must be positive");
  }
  std::vector<RegionRow> rows;
  rows.reserve(nu_grid.size());
  for (double nu : nu_grid) {
    if (!(nu > 0.0) || !(nu <= 0.999)) {
      throw InvalidArgument("region_boundary: grid values must lie in "
                            "(0, 0.999]");
    }
    RegionRow row;
    row.nu = nu;
    const double nu2 = nu * nu;
    row.r_figure1 = nu2 / (1.0 - nu2);
    row.r_sufficient = 2.0 * nu2 / (1.0 - nu2);

    double lo = row.r_figure1;
    double hi = row.r_sufficient;
    double c_lo = gap_condition(nu, lo);
    const double c_hi = gap_condition(nu, hi);
    if (c_lo <= 2.0) {
      row.status = BracketStatus::bracket_extended;
      for (int i = 0; i < 200 && c_lo <= 2.0; ++i) {
        hi = lo;
        lo *= 0.5;
        c_lo = gap_condition(nu, lo);
      }
    }
    row.condition_lo = c_lo;
    row.condition_hi = c_hi;
    if (!(c_lo > 2.0) || !(c_hi <= 2.0)) {
      row.status = BracketStatus::bracket_failure;
      row.r_star = std::numeric_limits<double>::quiet_NaN();
      row.residual = std::numeric_limits<double>::quiet_NaN();
      rows.push_back(row);
      continue;
    }
    double mid = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
      mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const double c = gap_condition(nu, mid);
      if (c > 2.0) {
        lo = mid;
      } else {
        hi = mid;
      }
      if (hi - lo <= 1e-15 * hi) break;
    }
    row.r_star = 0.5 * (lo + hi);
    row.residual = std::abs(gap_condition(nu, row.r_star) - 2.0);
    if (row.residual > tol) row.status = BracketStatus::bracket_failure;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace qho
