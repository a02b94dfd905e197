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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "qho/model.hpp"
#include "qho/oracle.hpp"
#include "qho/spectral.hpp"

using namespace qho;

namespace {

Eigen::VectorXd dense_eigenvalues(const TridiagonalForm& q) {
  const auto n = static_cast<Eigen::Index>(q.dim());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    a(i, i) = q.diag[i];
    if (i + 1 < n) a(i, i + 1) = a(i + 1, i) = q.offdiag[i];
  }
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(a).eigenvalues();
}

// Sum-of-squares form of the sector Dirichlet form for real y:
//   1/2 mu^2 w_m y_0^2 + 1/2 sum_j |mu sqrt(w_{j+m+1}) y_{j+1} - lam sqrt(w_{j+1}) y_j|^2
//                    + 1/2 sum_j |mu sqrt(w_{j+1}) y_{j+1} - lam sqrt(w_{j+m+1}) y_j|^2
double dirichlet_sum_of_squares(const ModelParams& p, std::size_t m,
                                const std::vector<double>& y) {
  const double r = p.r(), mu = p.mu(), lam = p.lambda();
  double e = 0.5 * mu * mu * omega(m, r) * y[0] * y[0];
  for (std::size_t j = 0; j < y.size(); ++j) {
    const double next = j + 1 < y.size() ? y[j + 1] : 0.0;
    const double a = mu * std::sqrt(omega(j + m + 1, r)) * next -
                     lam * std::sqrt(omega(j + 1, r)) * y[j];
    const double b = mu * std::sqrt(omega(j + 1, r)) * next -
                     lam * std::sqrt(omega(j + m + 1, r)) * y[j];
    e += 0.5 * (a * a + b * b);
  }
  return e;
}

}  // namespace

TEST_CASE("sector form coefficients") {
  const auto p = ModelParams::from_nu(0.5, 1.0, 1.0);
  CHECK(sector_form(p, 1, 10).diag[0] == doctest::Approx(1.125).epsilon(1e-15));
  const auto q2 = sector_form(p, 2, 10);
  CHECK(q2.diag[0] == doctest::Approx(3.25).epsilon(1e-15));
  std::vector<double> e0(10, 0.0);
  e0[0] = 1.0;
  CHECK(q2.quadratic(e0) == doctest::Approx(3.25).epsilon(1e-15));

  const auto p2 = ModelParams::from_nu(0.6, 0.7, 1.3);
  const double mu2 = 1.69, lam2 = p2.lambda() * p2.lambda();
  const double ml = p2.mu() * p2.lambda();
  const auto q0 = sector_form(p2, 0, 12);
  for (std::size_t j = 0; j + 1 < 12; ++j) {
    CHECK(q0.diag[j] == doctest::Approx(mu2 * omega(j, 0.7) +
                                        lam2 * omega(j + 1, 0.7)));
    CHECK(q0.offdiag[j] == doctest::Approx(-ml * omega(j + 1, 0.7)));
  }
  // Reflecting top level in the diagonal sector.
  CHECK(q0.diag[11] == doctest::Approx(mu2 * omega(11, 0.7)));
  for (std::size_t m = 1; m <= 4; ++m) {
    const auto q = sector_form(p2, m, 12);
    CHECK(q.diag[0] == doctest::Approx(0.5 * mu2 * omega(m, 0.7) +
                                       0.5 * lam2 * (omega(1, 0.7) +
                                                     omega(m + 1, 0.7))));
  }
  CHECK_THROWS_AS(sector_form(p, 1, 3), InvalidArgument);
}

TEST_CASE("quadratic form equals the sum-of-squares expansion") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  const auto p = ModelParams::from_nu(0.55, 0.9, 1.2);
  for (std::size_t m = 0; m <= 3; ++m) {
    const std::size_t d = 15;
    const auto q = sector_form(p, m, d);
    for (int rep = 0; rep < 5; ++rep) {
      std::vector<double> y(d, 0.0);
      for (std::size_t j = 0; j + 1 < d; ++j) y[j] = g(rng);
      const double sos = dirichlet_sum_of_squares(p, m, y);
      CHECK(q.quadratic(y) == doctest::Approx(sos).epsilon(1e-12));
    }
  }
}

TEST_CASE("tridiagonal eigenvalues by bisection") {
  TridiagonalForm one;
  one.diag = {3.5};
  CHECK(min_eig_tridiag(one, 1e-14) == doctest::Approx(3.5).epsilon(1e-14));
  TridiagonalForm two;
  two.diag = {2.0, 2.0};
  two.offdiag = {-1.0};
  CHECK(min_eig_tridiag(two, 1e-14) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(kth_eig_tridiag(two, 1, 1e-14) == doctest::Approx(3.0).epsilon(1e-13));
  CHECK_THROWS_AS(kth_eig_tridiag(two, 2, 1e-14), InvalidArgument);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int rep = 0; rep < 5; ++rep) {
    TridiagonalForm q;
    for (int i = 0; i < 30; ++i) q.diag.push_back(u(rng));
    for (int i = 0; i < 29; ++i) q.offdiag.push_back(u(rng));
    const auto ev = dense_eigenvalues(q);
    for (std::size_t k = 0; k < 30; ++k) {
      CHECK(std::abs(kth_eig_tridiag(q, k, 1e-12) - ev[k]) <= 1e-10);
    }
  }
}

TEST_CASE("sector minima") {
  const auto p = ModelParams::from_nu(0.5, 1.0, 1.0);
  CHECK(std::abs(min_eig_tridiag(sector_form(p, 1, 200), 1e-11) - 0.625) <=
        1e-8);
  for (std::size_t m = 1; m <= 5; ++m) {
    const auto q = sector_form(p, m, 200);
    CHECK(std::abs(min_eig_tridiag(q, 1e-11) - dense_eigenvalues(q)[0]) <= 1e-9);
  }
}

TEST_CASE("variational monotonicity in the truncation") {
  for (double nu : {0.3, 0.5, 0.8}) {
    const auto p = ModelParams::from_nu(nu, 1.0);
    for (std::size_t m = 1; m <= 3; ++m) {
      double prev = INFINITY;
      for (std::size_t d : {10u, 20u, 50u, 100u, 200u}) {
        const double v = min_eig_tridiag(sector_form(p, m, d), 1e-13);
        CHECK(v <= prev + 1e-12);
        CHECK(v >= off_diag_analytic(p, m) - 1e-8);
        prev = v;
      }
      const double a = min_eig_tridiag(sector_form(p, m, 100), 1e-13);
      const double b = min_eig_tridiag(sector_form(p, m, 200), 1e-13);
      CHECK(std::abs(a - b) < 1e-10);
    }
  }
}

TEST_CASE("diagonal sector") {
  const auto p = ModelParams::from_nu(0.5, 1.0, 1.0);
  const auto q0 = sector_form(p, 0, 200);
  CHECK(std::abs(kth_eig_tridiag(q0, 0, 1e-12)) <= 1e-10);
  CHECK(kernel_residual(q0, 0.5) <= 1e-12);
  const double d = diagonal_gap_numeric(p, 200, 1e-12);
  CHECK(d == doctest::Approx(0.911330100).epsilon(1e-8));
  CHECK(d >= 0.868984 - 1e-6);
  CHECK(d <= 1.25 + 1e-6);

  const auto ps = ModelParams::from_nu(0.8, 0.05);
  const double ds = diagonal_gap_numeric(ps, 400, 1e-12);
  CHECK(ds == doctest::Approx(0.0489648979).epsilon(1e-8));
  CHECK(ds < off_diag_analytic(ps, 1));
  CHECK(off_diag_analytic(ps, 1) == doctest::Approx(0.649).epsilon(1e-14));
}

TEST_CASE("kernel exactness detects a sign error") {
  for (double nu : {0.2, 0.5, 0.9}) {
    const auto p = ModelParams::from_nu(nu, 0.7, 1.1);
    auto q = sector_form(p, 0, 150);
    CHECK(kernel_residual(q, nu) <= 1e-12);
    for (auto& o : q.offdiag) o = -o;
    CHECK(kernel_residual(q, nu) > 1e-6);
  }
}

TEST_CASE("off-diagonal analytic minima") {
  const auto p = ModelParams::from_nu(0.5, 1.0, 1.0);
  CHECK(off_diag_analytic(p, 1) == 0.625);
  CHECK(off_diag_analytic(p, 2) == 2.5);
  CHECK_THROWS_AS(off_diag_analytic(p, 0), InvalidArgument);
  const auto p0 = ModelParams::from_nu(0.0, 1.7, 1.3);
  for (std::size_t m = 1; m <= 5; ++m) {
    CHECK(off_diag_analytic(p0, m) ==
          doctest::Approx(1.69 * m * (m + 1.7 - 1.0) / 2.0));
  }
  for (auto [nu, r] : {std::pair{0.3, 0.5}, {0.5, 1.0}, {0.8, 2.0}, {0.95, 0.01}}) {
    const auto pp = ModelParams::from_nu(nu, r);
    for (std::size_t m = 1; m < 10; ++m) {
      CHECK(off_diag_analytic(pp, m + 1) > off_diag_analytic(pp, m));
    }
    CHECK(off_diag_analytic(pp, 1) ==
          doctest::Approx(0.5 * (2 * nu * nu + (1 - nu * nu) * r)));
  }
}

TEST_CASE("off-diagonal minimizer") {
  const auto p = ModelParams::from_nu(0.5, 1.0);
  for (std::size_t m = 1; m <= 3; ++m) {
    const auto y = off_diag_minimizer(p, m, 200);
    double n2 = 0.0;
    for (double v : y) n2 += v * v;
    CHECK(n2 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(sector_form(p, m, 200).quadratic(y) -
                   off_diag_analytic(p, m)) <= 1e-8);
    const auto sq = oracle::minimizer_squares(0.5, 1.0, m, 200);
    for (std::size_t j = 0; j < 200; ++j) {
      CHECK(std::abs(y[j] * y[j] - sq[j]) <= 1e-10 * sq[j]);
    }
    CHECK(y[51] * y[51] / (y[50] * y[50]) == doctest::Approx(0.25).epsilon(0.01));
  }
  // Non-integer r exercises the Gamma ratio.
  const auto pr = ModelParams::from_nu(0.7, 0.35);
  for (std::size_t m = 1; m <= 4; ++m) {
    const auto y = off_diag_minimizer(pr, m, 300);
    const auto sq = oracle::minimizer_squares(0.7, 0.35, m, 300);
    for (std::size_t j = 0; j < 300; ++j) {
      CHECK(std::abs(y[j] * y[j] - sq[j]) <= 1e-10 * sq[j]);
    }
  }
  CHECK_THROWS_AS(off_diag_minimizer(p, 0, 10), InvalidArgument);
}

TEST_CASE("diagonal lower bound") {
  const auto p = ModelParams::from_nu(0.5, 1.0, 1.0);
  CHECK(diagonal_lower_bound(p) ==
        doctest::Approx(0.869014874195551728).epsilon(1e-14));
  CHECK(diagonal_lower_bound(p) ==
        doctest::Approx(1.0 / (4.0 * std::log(4.0 / 3.0))).epsilon(1e-14));
  for (double nu : {0.3, 0.5, 0.8}) {
    for (double r : {0.5, 1.0, 2.0}) {
      const auto pp = ModelParams::from_nu(nu, r, 1.5);
      const double via_integral = 2.25 / oracle::lerch_integral(nu, r);
      CHECK(std::abs(diagonal_lower_bound(pp) - via_integral) <= 1e-10);
      CHECK(diagonal_lower_bound(pp) <= 2.25 * r);
      CHECK(diagonal_lower_bound(pp) >= 2.25 * r * (1 - nu * nu));
    }
  }
  CHECK(diagonal_lower_bound(ModelParams::from_nu(0.0, 1.7, 2.0)) ==
        doctest::Approx(4.0 * 1.7));
  const auto big = ModelParams::from_nu(0.5, 500.0);
  CHECK(diagonal_lower_bound(big) / (500.0 * 0.75) ==
        doctest::Approx(1.0).epsilon(2e-3));
}

TEST_CASE("Hardy profile") {
  for (auto [nu, r] : {std::pair{0.5, 1.0}, {0.8, 0.3}}) {
    const auto p = ModelParams::from_nu(nu, r);
    const auto h = hardy_profile(p, 10000);
    REQUIRE(h.values.size() == 10001);
    for (std::size_t u = 1; u < h.values.size(); ++u) {
      CHECK(h.values[u] >= h.values[u - 1]);
    }
    CHECK(std::abs(h.values.back() - h.limit) <= 1e-3 * h.limit);
    CHECK(h.limit == doctest::Approx(lerch_phi(nu * nu, r)).epsilon(1e-15));
    CHECK(h.lower_bound ==
          doctest::Approx(diagonal_lower_bound(p)).epsilon(1e-14));
  }
  CHECK_THROWS_AS(hardy_profile(ModelParams::from_nu(0.5, 1.0), 9),
                  InvalidArgument);
}

TEST_CASE("upper bounds") {
  const auto p = ModelParams::from_nu(0.5, 1.0, 1.0);
  const auto ub = upper_bounds(p);
  CHECK(ub.linear == doctest::Approx(1.25).epsilon(1e-15));
  CHECK(ub.lerch == doctest::Approx(0.91135256).epsilon(1e-7));
  for (double nu : {0.1, 0.5, 0.9}) {
    for (double r : {0.05, 1.0, 3.0}) {
      const auto pp = ModelParams::from_nu(nu, r, 1.7);
      CHECK(upper_bounds(pp).linear ==
            doctest::Approx(2.0 * off_diag_analytic(pp, 1)).epsilon(1e-14));
    }
  }
  const double expect[4] = {0.19504856, 0.09869927, 0.04966641, 0.00998638};
  double prev = INFINITY;
  int i = 0;
  for (double r : {0.2, 0.1, 0.05, 0.01}) {
    const double v = upper_bounds(ModelParams::from_nu(0.5, r)).lerch;
    CHECK(v == doctest::Approx(expect[i++]).epsilon(1e-7));
    CHECK(v < prev);
    prev = v;
  }
  CHECK(upper_bounds(ModelParams::from_nu(0.8, 0.05)).lerch ==
        doctest::Approx(0.04896499).epsilon(1e-6));
}

TEST_CASE("gap report") {
  SUBCASE("exact regime") {
    const auto rep = gap_report(ModelParams::from_nu(0.5, 1.0, 1.0), 200, 5);
    CHECK(rep.regime == Regime::exact_off_diagonal);
    CHECK(rep.gap_value == 0.625);
    CHECK(rep.condition_value ==
          doctest::Approx(1.43841036225890464).epsilon(1e-13));
    CHECK(rep.sector_minima_numeric.size() == 6);
    CHECK(rep.off_diag_analytic.size() == 5);
  }
  SUBCASE("undetermined regime") {
    const auto rep = gap_report(ModelParams::from_nu(0.8, 0.05), 400, 5);
    CHECK(rep.regime == Regime::undetermined);
    CHECK(rep.gap_lower < rep.gap_upper);
    CHECK(rep.diagonal_numeric < rep.off_diag_analytic[0]);
    CHECK(std::isnan(rep.gap_value));
  }
  SUBCASE("report invariants across parameters") {
    for (double nu : {0.2, 0.5, 0.7}) {
      for (double r : {0.1, 0.5, 1.0, 3.0}) {
        CAPTURE(nu);
        CAPTURE(r);
        const auto rep = gap_report(ModelParams::from_nu(nu, r, 1.3), 200, 4);
        CHECK(rep.diagonal_lower <= rep.diagonal_numeric + 1e-10);
        CHECK(rep.diagonal_numeric <=
              std::min(rep.upper_linear, rep.upper_lerch) + 1e-9);
        for (std::size_t m = 1; m <= 4; ++m) {
          CHECK(rep.sector_minima_numeric[m] >=
                rep.off_diag_analytic[m - 1] - 1e-8);
        }
        if (rep.regime == Regime::exact_off_diagonal) {
          CHECK(rep.condition_value <= 2.0);
        }
        if (r >= 2 * nu * nu / (1 - nu * nu)) {
          CHECK(rep.regime == Regime::exact_off_diagonal);
        }
      }
    }
  }
  CHECK_THROWS_AS(gap_report(ModelParams::from_nu(0.5, 1.0), 50, 2),
                  InvalidArgument);
  CHECK_THROWS_AS(gap_report(ModelParams::from_nu(1.0, 1.0), 50, 5),
                  InvalidArgument);
}

TEST_CASE("gap condition") {
  CHECK(gap_condition(0.5, 1.0 / 3.0) ==
        doctest::Approx(2.41508).epsilon(1e-5));
  CHECK(gap_condition(0.5, 2.0 / 3.0) ==
        doctest::Approx(1.67876).epsilon(1e-5));
  CHECK(lerch_phi(0.25, 1.0 / 3.0) ==
        doctest::Approx(3.22010699294768596).epsilon(1e-14));
  CHECK(lerch_phi(0.25, 2.0 / 3.0) ==
        doctest::Approx(1.67875510519159921).epsilon(1e-14));
  for (double nu : {0.1, 0.5, 0.8, 0.95, 0.999}) {
    double prev = INFINITY;
    for (double r = 0.01; r < 50.0; r *= 1.3) {
      const double c = gap_condition(nu, r);
      CHECK(c < prev);
      prev = c;
    }
  }
}

TEST_CASE("region boundary") {
  const double half = 0.5;
  const auto row = region_boundary(std::span<const double>(&half, 1), 1e-8)[0];
  CHECK(row.r_star == doctest::Approx(0.463414916728757).epsilon(1e-12));
  CHECK(row.r_star > 1.0 / 3.0);
  CHECK(row.r_star < 2.0 / 3.0);
  CHECK(row.residual <= 1e-8);
  CHECK(row.status == BracketStatus::ok);
  CHECK(row.r_sufficient == doctest::Approx(2.0 / 3.0));
  CHECK(row.r_figure1 == doctest::Approx(1.0 / 3.0));

  std::vector<double> grid(50);
  for (int i = 0; i < 50; ++i) grid[i] = 0.1 + 0.85 * i / 49.0;
  const auto rows = region_boundary(grid, 1e-8);
  CHECK(rows.front().r_star == doctest::Approx(0.0198096).epsilon(1e-5));
  CHECK(rows.back().r_star == doctest::Approx(7.24670).epsilon(1e-5));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].residual <= 1e-8);
    CHECK(rows[i].status != BracketStatus::bracket_failure);
    if (i > 0) CHECK(rows[i].r_star > rows[i - 1].r_star);
    // Above nu ~ 0.7677 the boundary drops below nu^2/(1-nu^2).
    const bool below = rows[i].r_star < rows[i].r_figure1;
    CHECK(below == (rows[i].status == BracketStatus::bracket_extended));
    CHECK(below == (rows[i].nu > 0.7677237724793446));
    CHECK(rows[i].r_star < rows[i].r_sufficient);
  }
  const double edge = 0.999;
  const auto last = region_boundary(std::span<const double>(&edge, 1), 1e-8)[0];
  CHECK(last.residual <= 1e-8);

  const double bad[2] = {0.5, 1.0};
  CHECK_THROWS_AS(region_boundary(bad, 1e-8), InvalidArgument);
  const double zero = 0.0;
  CHECK_THROWS_AS(region_boundary(std::span<const double>(&zero, 1), 1e-8),
                  InvalidArgument);
}
