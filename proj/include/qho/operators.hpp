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

#ifndef QHO_OPERATORS_HPP
#define QHO_OPERATORS_HPP

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qho/model.hpp"

namespace qho {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;

//============================================================================
// OperatorSet
//============================================================================

// Truncated Fock-space operators of the sl2 representation, stored as
// bands. Dense matrices are built on request.
//
// Reflecting truncation: products are taken inside the truncated space, so
// (B B+) has a zero top entry. The creation jump out of level dim-1 and its
// damping term disappear together, which keeps the generator unital and the
// predual trace preserving.
class OperatorSet {
 public:
  OperatorSet(const ModelParams& params, std::size_t dim);

  const ModelParams& params() const { return params_; }
  std::size_t dim() const { return dim_; }

  // omega_n for n = 0..dim (one past the last retained level).
  double omega(std::size_t n) const { return omega_[n]; }
  double sqrt_omega(std::size_t n) const { return sqrt_omega_[n]; }

  // Diagonal of the truncated B B+: omega_{n+1} below the top level, 0 at it.
  double birth(std::size_t n) const {
    return n + 1 < dim_ ? omega_[n + 1] : 0.0;
  }

  // zeta+ omega_{n+1} + zeta- omega_n.
  double hamiltonian(std::size_t n) const { return h_diag_[n]; }

  // -(lambda^2/2 + i zeta+) omega_{n+1} - (mu^2/2 + i zeta-) omega_n.
  const std::vector<Complex>& g_diag() const { return g_diag_; }

  RMatrix B() const;
  RMatrix B_plus() const;
  RMatrix N() const;
  RMatrix M() const;
  RMatrix H() const;

 private:
  ModelParams params_;
  std::size_t dim_;
  std::vector<double> omega_;
  std::vector<double> sqrt_omega_;
  std::vector<double> h_diag_;
  std::vector<Complex> g_diag_;
};

OperatorSet build_operators(const ModelParams& params,
                            const TruncationSpec& trunc);

//============================================================================
// DensityMatrix
//============================================================================

// Hermitian, unit-trace, positive semidefinite state on the truncated space.
// The constructor symmetrizes its input and rejects states whose trace is
// off by more than 1e-12 or whose smallest eigenvalue is below -1e-10.
class DensityMatrix {
 public:
  struct AssumeValid {};

  explicit DensityMatrix(CMatrix entries);
  DensityMatrix(CMatrix entries, AssumeValid);

  static DensityMatrix basis(std::size_t dim, std::size_t k);
  static DensityMatrix diagonal(std::span<const double> diag);

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  const CMatrix& matrix() const { return m_; }
  double min_eigenvalue() const;

 private:
  CMatrix m_;
};

double min_hermitian_eigenvalue(const CMatrix& m);

//============================================================================
// Generator
//============================================================================

// Heisenberg-picture generator on the truncated matrix units:
//   L(x)_jk = i (h_j - h_k) x_jk
//           + mu^2 sqrt(w_j w_k) x_{j-1,k-1} - mu^2/2 (w_j + w_k) x_jk
//           + lam^2 sqrt(b_j b_k) x_{j+1,k+1} - lam^2/2 (b_j + b_k) x_jk
// with b_j = birth(j).
CMatrix apply_generator(const OperatorSet& ops, const CMatrix& x);

// Predual (Schrodinger-picture) generator, the trace dual of
// apply_generator.
CMatrix apply_predual(const OperatorSet& ops, const CMatrix& rho);
CMatrix apply_predual(const OperatorSet& ops, const DensityMatrix& rho);

// Writes apply_predual(rho) into out, touching only the diagonals
// rho_{j, j+m} for m in sectors. The generator never mixes sectors, so
// entries outside the listed sectors are left untouched.
void apply_predual_sectors(const OperatorSet& ops, const CMatrix& rho,
                           CMatrix& out, std::span<const long> sectors);

// The predual generator compiled for a fixed set of sectors into a
// three-point stencil on the packed entries rho_{j, j+m}. Used by the
// integrator, which only needs the sectors present in the initial state.
class SectorStencil {
 public:
  SectorStencil(const OperatorSet& ops, std::span<const long> sectors);

  std::size_t size() const { return rows_.size(); }
  std::size_t dim() const { return dim_; }

  void pack(const CMatrix& rho, std::vector<Complex>& out) const;
  // Writes the packed entries into m; other entries are zeroed.
  void unpack(std::span<const Complex> packed, CMatrix& m) const;

  void apply(std::span<const Complex> in, std::span<Complex> out) const;

  // Replaces each entry by the mean of itself and the conjugate of its
  // transpose partner (entries whose partner sector is absent are kept).
  void symmetrize(std::span<Complex> packed) const;
  Complex trace(std::span<const Complex> packed) const;
  void scale(std::span<Complex> packed, double factor) const;

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::size_t dim_;
  std::vector<std::size_t> rows_;
  std::vector<std::size_t> cols_;
  std::vector<Complex> self_;
  std::vector<double> up_coef_;    // couples to (j+1, k+1)
  std::vector<double> down_coef_;  // couples to (j-1, k-1)
  std::vector<std::size_t> up_;
  std::vector<std::size_t> down_;
  std::vector<std::size_t> partner_;
  std::vector<std::size_t> diagonal_;
};

//============================================================================
// Weighted Hilbert-Schmidt embedding
//============================================================================

// x -> rho^{1/4} x rho^{1/4} for diagonal rho = diag(pi).
CMatrix embed(const CMatrix& x, std::span<const double> pi);
CMatrix un_embed(const CMatrix& xi, std::span<const double> pi);

// Matrix of the embedded generator xi -> embed(L(un_embed(xi))) restricted
// to the sector spanned by |e_j><e_{j+m}|, in that basis (rows index the
// output coefficient). m may be negative.
CMatrix embedded_sector_matrix(const OperatorSet& ops,
                               std::span<const double> pi, long m);

//============================================================================
// Two-photon equivalence
//============================================================================

enum class Parity { even, odd };

std::string to_string(Parity p);
Parity parse_parity(const std::string& s);

struct EquivalenceReport {
  Parity parity = Parity::even;
  double r = 0.0;
  double proportionality_constant = 0.0;
  // max |lhs - c rhs| / max(1, |c rhs|) over the probed entries.
  double max_residual = 0.0;
  double max_abs_residual = 0.0;
  double xi_plus = 0.0;
  double xi_minus = 0.0;
  std::size_t probes = 0;
  // Describes the measured orientation of the factor between the
  // generators.
  std::string convention;
};

// Compares U* L_tp(U x U*) U with c L(x) over matrix units |e_j><e_k|,
// j, k < dim - 1, where U maps e_k to e_{2k} (even) or e_{2k+1} (odd) and
// L_tp is the two-photon generator on 2 dim levels with Hamiltonian
// xi- a+^2 a^2 + xi+ a^2 a+^2. c is fitted by least squares over every
// probed entry.
EquivalenceReport two_photon_check(const ModelParams& params, double xi_plus,
                                   double xi_minus, Parity parity,
                                   const TruncationSpec& trunc);

// r required by the parity: 1/2 for even, 3/2 for odd.
double parity_r(Parity p);

}  // namespace qho

#endif  // QHO_OPERATORS_HPP
