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

#include "qho/model.hpp"

#include <cmath>
#include <limits>

namespace qho {

namespace {

bool finite(double x) { return std::isfinite(x); }

}  // namespace

ModelParams::ModelParams(double r, double lambda, double mu, double zeta_plus,
                         double zeta_minus)
    : r_(r),
      lambda_(lambda),
      mu_(mu),
      zeta_plus_(zeta_plus),
      zeta_minus_(zeta_minus),
      nu_(0.0) {
  if (!finite(r) || r <= 0.0) {
    throw InvalidArgument("r must be strictly positive, got " +
                          std::to_string(r));
  }
  if (!finite(lambda) || lambda < 0.0) {
    throw InvalidArgument("lambda must be nonnegative");
  }
  if (!finite(mu) || mu <= 0.0) {
    throw InvalidArgument("mu must be strictly positive");
  }
  if (!finite(zeta_plus) || !finite(zeta_minus)) {
    throw InvalidArgument("zeta coefficients must be finite");
  }
  nu_ = lambda_ / mu_;
}

ModelParams ModelParams::from_nu(double nu, double r, double mu,
                                 double zeta_plus, double zeta_minus) {
  if (!finite(nu) || nu < 0.0) {
    throw InvalidArgument("nu must be nonnegative");
  }
  return ModelParams(r, nu * mu, mu, zeta_plus, zeta_minus);
}

void ModelParams::require_invariant_state() const {
  if (!(nu_ < 1.0)) {
    throw InvalidArgument(
        "nu >= 1: the semigroup is transient and has no invariant state");
  }
}

void TruncationSpec::validate() const {
  if (dim < 2) {
    throw InvalidArgument("truncation dim must be at least 2");
  }
  if (!(tail_tol > 0.0 && tail_tol < 1.0)) {
    throw InvalidArgument("tail_tol must lie in (0, 1)");
  }
}

double omega(std::size_t n, double r) {
  if (!(r > 0.0)) {
    throw InvalidArgument("omega: r must be strictly positive");
  }
  const double x = static_cast<double>(n);
  return x * (x + r - 1.0);
}

double lerch_phi(double z, double r, double tol) {
  if (!(z >= 0.0) || !(z < 1.0)) {
    throw InvalidArgument("lerch_phi: z must lie in [0, 1)");
  }
  if (!(r > 0.0)) {
    throw InvalidArgument("lerch_phi: r must be strictly positive");
  }
  if (!(tol > 0.0)) {
    throw InvalidArgument("lerch_phi: tol must be positive");
  }
  if (z == 0.0) {
    return 1.0 / r;
  }
  // Tail after K terms is at most z^K / ((K + r)(1 - z)).
  const double one_minus_z = 1.0 - z;
  std::vector<double> terms;
  double zk = 1.0;
  for (std::size_t k = 0;; ++k) {
    const double denom = static_cast<double>(k) + r;
    if (k > 0 && zk / (denom * one_minus_z) <= tol) break;
    terms.push_back(zk / denom);
    zk *= z;
  }
  double sum = 0.0;
  for (auto it = terms.rbegin(); it != terms.rend(); ++it) sum += *it;
  return sum;
}

std::vector<double> invariant_diag(double nu, const TruncationSpec& trunc,
                                   bool normalized) {
  trunc.validate();
  if (!(nu >= 0.0) || !(nu < 1.0)) {
    throw InvalidArgument(
        "invariant_diag: nu must lie in [0, 1); for nu >= 1 there is no "
        "invariant state");
  }
  const double q = nu * nu;
  std::vector<double> pi(trunc.dim);
  double w = 1.0 - q;
  for (auto& p : pi) {
    p = w;
    w *= q;
  }
  if (normalized) {
    double total = 0.0;
    for (std::size_t u = pi.size(); u-- > 0;) {
      total += pi[u];
    }
    for (auto& p : pi) {
      p /= total;
    }
  }
  return pi;
}

double invariant_tail_mass(double nu, std::size_t dim) {
  return std::pow(nu, 2.0 * static_cast<double>(dim));
}

double nu_from_temperature(double s, double beta) {
  if (!(s > 0.0) || !(beta > 0.0)) {
    throw InvalidArgument("nu_from_temperature: s and beta must be positive");
  }
  return std::exp(-0.5 * s * beta);
}

DiagonalBoundSpec::DiagonalBoundSpec(double r_param) : r(r_param) {
  if (!(r > 0.0)) {
    throw InvalidArgument("DiagonalBoundSpec: r must be strictly positive");
  }
}

double DiagonalBoundSpec::a(std::size_t n) const {
  const double x = static_cast<double>(n) + r;
  return 1.0 / ((x + 1.0) * x);
}

double DiagonalBoundSpec::tail(std::size_t k) const {
  return 1.0 / (static_cast<double>(k) + r);
}

std::vector<double> DiagonalBoundSpec::a_seq(std::size_t count) const {
  std::vector<double> out(count);
  for (std::size_t n = 0; n < count; ++n) out[n] = a(n);
  return out;
}

std::vector<double> DiagonalBoundSpec::tail_seq(std::size_t count) const {
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k) out[k] = tail(k);
  return out;
}

}  // namespace qho
