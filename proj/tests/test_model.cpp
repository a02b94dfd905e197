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
#include <numeric>

#include "qho/model.hpp"
#include "qho/oracle.hpp"

using namespace qho;

TEST_CASE("omega values") {
  CHECK(omega(0, 0.7) == 0.0);
  CHECK(omega(0, 3.0) == 0.0);
  CHECK(omega(1, 0.7) == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(omega(2, 0.5) == 3.0);
  CHECK_THROWS_AS(omega(3, 0.0), InvalidArgument);
  CHECK_THROWS_AS(omega(3, -1.0), InvalidArgument);
}

TEST_CASE("omega increments equal 2n + r") {
  for (double r : {0.05, 0.5, 1.0, 1.5, 7.0}) {
    for (std::size_t n = 0; n < 200; ++n) {
      const double diff = omega(n + 1, r) - omega(n, r);
      CHECK(diff == doctest::Approx(2.0 * n + r).epsilon(1e-13));
      if (n >= 1) CHECK(omega(n, r) > 0.0);
    }
  }
}

TEST_CASE("lerch_phi closed forms") {
  CHECK(lerch_phi(0.0, 2.0, 1e-12) == 0.5);
  // -ln(1 - z)/z at z = 1/4, and 2 artanh(sqrt z)/sqrt z
  const double log_form = 4.0 * std::log(4.0 / 3.0);
  CHECK(std::abs(lerch_phi(0.25, 1.0, 1e-12) - log_form) <= 1e-12);
  CHECK(std::abs(lerch_phi(0.25, 1.0) - 1.15072828980712371) <= 1e-15);
  CHECK(std::abs(lerch_phi(0.25, 0.5, 1e-12) - 2.0 * std::atanh(0.5) / 0.5) <=
        1e-12);
  CHECK(std::abs(lerch_phi(0.25, 0.5) - 2.19722457733621938) <= 1e-15);
  // Close to the boundary the tail bound still controls the error.
  const double z = 0.998;
  CHECK(lerch_phi(z, 1.0) ==
        doctest::Approx(-std::log1p(-z) / z).epsilon(1e-13));
}

TEST_CASE("lerch_phi argument checks") {
  CHECK_THROWS_AS(lerch_phi(1.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(lerch_phi(1.5, 1.0), InvalidArgument);
  CHECK_THROWS_AS(lerch_phi(-0.1, 1.0), InvalidArgument);
  CHECK_THROWS_AS(lerch_phi(0.5, 0.0), InvalidArgument);
  CHECK_THROWS_AS(lerch_phi(0.5, 1.0, 0.0), InvalidArgument);
}

TEST_CASE("lerch_phi elementary bound") {
  for (double z : {0.0, 0.1, 0.5, 0.9, 0.99}) {
    for (double r : {0.01, 0.3, 1.0, 4.0}) {
      CHECK(lerch_phi(z, r) <= 1.0 / (r * (1.0 - z)) * (1.0 + 1e-15));
      CHECK(lerch_phi(z, r) >= 1.0 / r);
    }
  }
}

TEST_CASE("lerch_phi matches integral forms by quadrature") {
  for (double nu : {0.3, 0.5, 0.8}) {
    for (double r : {0.5, 1.0, 2.0}) {
      CAPTURE(nu);
      CAPTURE(r);
      const double z = nu * nu;
      CHECK(std::abs(lerch_phi(z, r) - oracle::lerch_integral(nu, r)) <= 1e-10);
      const double tele = lerch_phi(z, r) - lerch_phi(z, r + 1.0);
      CHECK(std::abs(tele - oracle::telescoped_integral(nu, r)) <= 1e-10);
    }
  }
}

TEST_CASE("invariant_diag") {
  TruncationSpec tr;
  tr.dim = 10;
  SUBCASE("ground state at nu = 0") {
    const auto d = invariant_diag(0.0, tr);
    CHECK(d[0] == 1.0);
    for (std::size_t j = 1; j < d.size(); ++j) CHECK(d[j] == 0.0);
  }
  SUBCASE("raw geometric entries") {
    const auto d = invariant_diag(0.5, tr, false);
    CHECK(d[0] == 0.75);
    CHECK(d[1] == 0.1875);
    CHECK(d[2] == 0.046875);
    for (std::size_t j = 1; j < d.size(); ++j) {
      CHECK(d[j] / d[j - 1] == doctest::Approx(0.25).epsilon(1e-15));
    }
    const double tail = invariant_tail_mass(0.5, tr.dim);
    CHECK(tail == doctest::Approx(std::pow(0.25, 10)).epsilon(1e-15));
    const double sum = std::accumulate(d.begin(), d.end(), 0.0);
    CHECK(sum + tail == doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("normalized sums to one") {
    for (double nu : {0.1, 0.5, 0.9, 0.99}) {
      const auto d = invariant_diag(nu, tr);
      double sum = 0.0;
      for (double v : d) sum += v;
      CHECK(std::abs(sum - 1.0) <= 1e-15);
    }
  }
  CHECK_THROWS_AS(invariant_diag(1.0, tr), InvalidArgument);
  CHECK_THROWS_AS(invariant_diag(1.2, tr), InvalidArgument);
}

TEST_CASE("nu_from_temperature") {
  CHECK(nu_from_temperature(2.0, std::log(2.0)) ==
        doctest::Approx(0.5).epsilon(1e-15));
  CHECK(nu_from_temperature(1.0, 1e3) < 1e-200);
  const double hot = nu_from_temperature(1.0, 1e-12);
  CHECK(hot < 1.0);
  CHECK(hot > 1.0 - 1e-11);
  CHECK_THROWS_AS(nu_from_temperature(0.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(nu_from_temperature(1.0, -1.0), InvalidArgument);
}

TEST_CASE("ModelParams") {
  const auto p = ModelParams::from_nu(0.4, 1.5, 2.0, 0.3, -0.2);
  CHECK(p.lambda() == doctest::Approx(0.8));
  CHECK(p.nu() == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(p.zeta_plus() == 0.3);
  CHECK(p.zeta_minus() == -0.2);
  CHECK_THROWS_AS(ModelParams(0.0, 1.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(ModelParams(1.0, -1.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(ModelParams(1.0, 1.0, 0.0), InvalidArgument);
  CHECK_NOTHROW(ModelParams(1.0, 0.5, 1.0).require_invariant_state());
  CHECK_THROWS_AS(ModelParams(1.0, 1.0, 1.0).require_invariant_state(),
                  InvalidArgument);
}

TEST_CASE("TruncationSpec validation") {
  TruncationSpec t;
  CHECK_NOTHROW(t.validate());
  t.dim = 1;
  CHECK_THROWS_AS(t.validate(), InvalidArgument);
  t.dim = 8;
  t.tail_tol = 0.0;
  CHECK_THROWS_AS(t.validate(), InvalidArgument);
  t.tail_tol = 1.0;
  CHECK_THROWS_AS(t.validate(), InvalidArgument);
}

TEST_CASE("Hardy weight sequences telescope") {
  for (double r : {0.05, 0.5, 1.0, 2.5}) {
    const DiagonalBoundSpec s(r);
    const auto a = s.a_seq(60);
    const auto A = s.tail_seq(61);
    for (std::size_t n = 0; n < 60; ++n) {
      CHECK(a[n] == doctest::Approx(A[n] - A[n + 1]).epsilon(1e-13));
      CHECK(A[n + 1] < A[n]);
      CHECK(A[n] > 0.0);
    }
    // sum_{n >= k} a_n: finite sum to N plus the exact remainder A_N.
    const std::size_t N = 5000;
    for (std::size_t k = 0; k <= 50; ++k) {
      double s_k = s.tail(N);
      for (std::size_t n = N; n-- > k;) s_k += s.a(n);
      CHECK(s_k == doctest::Approx(s.tail(k)).epsilon(1e-13));
    }
  }
}
