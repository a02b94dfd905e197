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

#ifndef QHO_MODEL_HPP
#define QHO_MODEL_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace qho {

// Thrown for inputs outside an operation's domain (CLI exit code 1).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Thrown when a computation cannot meet its numerical contract
// (CLI exit code 2).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Boundary occupancy exceeded the truncation tolerance.
class TruncationOverflow : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Physical parameters of the quadratic oscillator.
//
//   r      representation parameter, omega_n = n (n + r - 1)
//   lambda emission coupling (jump operator lambda B+)
//   mu     absorption coupling (jump operator mu B)
//   zeta_plus, zeta_minus  Hamiltonian coefficients of B B+ and B+ B
//
// nu = lambda / mu is cached. nu < 1 is the regime with a faithful
// invariant state; nu = 1 is transient.
class ModelParams {
 public:
  ModelParams(double r, double lambda, double mu, double zeta_plus = 0.0,
              double zeta_minus = 0.0);

  static ModelParams from_nu(double nu, double r, double mu = 1.0,
                             double zeta_plus = 0.0, double zeta_minus = 0.0);

  double r() const { return r_; }
  double lambda() const { return lambda_; }
  double mu() const { return mu_; }
  double zeta_plus() const { return zeta_plus_; }
  double zeta_minus() const { return zeta_minus_; }
  double nu() const { return nu_; }

  // Throws InvalidArgument unless nu < 1.
  void require_invariant_state() const;

 private:
  double r_;
  double lambda_;
  double mu_;
  double zeta_plus_;
  double zeta_minus_;
  double nu_;
};

// Fock levels 0..dim-1 are retained; tail_tol bounds the admissible
// population of the top two levels.
struct TruncationSpec {
  std::size_t dim = 64;
  double tail_tol = 1e-8;

  void validate() const;
};

// omega_n = n (n + r - 1). Rejects r <= 0.
double omega(std::size_t n, double r);

// Lerch transcendent Phi(z, 1, r) = sum_{k>=0} z^k / (k + r) for 0 <= z < 1.
// The cutoff K is the first index with z^K / ((K + r)(1 - z)) <= tol.
double lerch_phi(double z, double r, double tol = 1e-15);

// Diagonal of the invariant state (1 - nu^2) nu^{2u}, u = 0..dim-1.
// With normalized = true the entries are rescaled to sum to one, which is
// the stationary vector of the reflecting-truncated chain.
std::vector<double> invariant_diag(double nu, const TruncationSpec& trunc,
                                   bool normalized = true);

// Mass beyond level dim-1 of the untruncated invariant state: nu^{2 dim}.
double invariant_tail_mass(double nu, std::size_t dim);

// nu = exp(-s beta / 2), from lambda^2 / mu^2 = exp(-s beta).
double nu_from_temperature(double s, double beta);

// Hardy weight sequences used by the diagonal lower bound:
//   a_n = 1 / ((n + r + 1)(n + r)),   A_k = 1 / (k + r) = sum_{n>=k} a_n.
struct DiagonalBoundSpec {
  double r;

  explicit DiagonalBoundSpec(double r_param);

  double a(std::size_t n) const;
  double tail(std::size_t k) const;

  std::vector<double> a_seq(std::size_t count) const;
  std::vector<double> tail_seq(std::size_t count) const;
};

}  // namespace qho

#endif  // QHO_MODEL_HPP
