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

#include "qho/operators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace qho {

namespace {

constexpr Complex kI{0.0, 1.0};

void require_square(const CMatrix& x, std::size_t dim, const char* what) {
  if (static_cast<std::size_t>(x.rows()) != dim ||
      static_cast<std::size_t>(x.cols()) != dim) {
    throw InvalidArgument(std::string(what) + ": expected a " +
                          std::to_string(dim) + "x" + std::to_string(dim) +
                          " matrix");
  }
}

void require_weights(std::span<const double> pi, std::size_t dim) {
  if (pi.size() != dim) {
    throw InvalidArgument("weight vector length does not match matrix");
  }
  for (double p : pi) {
    if (!(p > 0.0)) {
      throw InvalidArgument("embedding weights must be strictly positive");
    }
  }
}

// One entry of the predual generator.
inline Complex predual_entry(const OperatorSet& ops, const CMatrix& rho,
                             std::size_t j, std::size_t k, double mu2,
                             double lam2) {
  const std::size_t d = ops.dim();
  Complex v = -kI * (ops.hamiltonian(j) - ops.hamiltonian(k)) * rho(j, k);
  v -= 0.5 * (mu2 * (ops.omega(j) + ops.omega(k)) +
              lam2 * (ops.birth(j) + ops.birth(k))) *
       rho(j, k);
  if (j + 1 < d && k + 1 < d) {
    v += mu2 * ops.sqrt_omega(j + 1) * ops.sqrt_omega(k + 1) *
         rho(j + 1, k + 1);
  }
  if (j > 0 && k > 0) {
    v += lam2 * ops.sqrt_omega(j) * ops.sqrt_omega(k) * rho(j - 1, k - 1);
  }
  return v;
}

}  // namespace

//----------------------------------------------------------------------------
// OperatorSet
//----------------------------------------------------------------------------

OperatorSet::OperatorSet(const ModelParams& params, std::size_t dim)
    : params_(params), dim_(dim) {
  if (dim < 2) {
    throw InvalidArgument("operator truncation needs dim >= 2");
  }
  const double r = params.r();
  omega_.resize(dim + 1);
  sqrt_omega_.resize(dim + 1);
  for (std::size_t n = 0; n <= dim; ++n) {
    omega_[n] = qho::omega(n, r);
    sqrt_omega_[n] = std::sqrt(omega_[n]);
  }
  h_diag_.resize(dim);
  g_diag_.resize(dim);
  const double lam2 = params.lambda() * params.lambda();
  const double mu2 = params.mu() * params.mu();
  for (std::size_t n = 0; n < dim; ++n) {
    h_diag_[n] =
        params.zeta_plus() * omega_[n + 1] + params.zeta_minus() * omega_[n];
    g_diag_[n] = -Complex(0.5 * lam2, params.zeta_plus()) * omega_[n + 1] -
                 Complex(0.5 * mu2, params.zeta_minus()) * omega_[n];
  }
}

RMatrix OperatorSet::B() const {
  RMatrix b = RMatrix::Zero(dim_, dim_);
  for (std::size_t n = 1; n < dim_; ++n) b(n - 1, n) = sqrt_omega_[n];
  return b;
}

RMatrix OperatorSet::B_plus() const { return B().transpose(); }

RMatrix OperatorSet::N() const {
  RMatrix out = RMatrix::Zero(dim_, dim_);
  for (std::size_t n = 0; n < dim_; ++n) out(n, n) = static_cast<double>(n);
  return out;
}

RMatrix OperatorSet::M() const {
  RMatrix out = RMatrix::Zero(dim_, dim_);
  for (std::size_t n = 0; n < dim_; ++n) {
    out(n, n) = 2.0 * static_cast<double>(n) + params_.r();
  }
  return out;
}

RMatrix OperatorSet::H() const {
  RMatrix out = RMatrix::Zero(dim_, dim_);
  for (std::size_t n = 0; n < dim_; ++n) out(n, n) = h_diag_[n];
  return out;
}

OperatorSet build_operators(const ModelParams& params,
                            const TruncationSpec& trunc) {
  trunc.validate();
  return OperatorSet(params, trunc.dim);
}

//----------------------------------------------------------------------------
// DensityMatrix
//----------------------------------------------------------------------------

double min_hermitian_eigenvalue(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

DensityMatrix::DensityMatrix(CMatrix entries) : m_(std::move(entries)) {
  if (m_.rows() != m_.cols() || m_.rows() < 1) {
    throw InvalidArgument("density matrix must be square and nonempty");
  }
  m_ = (0.5 * (m_ + m_.adjoint())).eval();
  const double tr = m_.trace().real();
  if (std::abs(tr - 1.0) > 1e-12) {
    throw InvalidArgument("density matrix trace deviates from 1 by " +
                          std::to_string(tr - 1.0));
  }
  const double lo = min_eigenvalue();
  if (lo < -1e-10) {
    throw InvalidArgument("density matrix is not positive semidefinite "
                          "(min eigenvalue " + std::to_string(lo) + ")");
  }
}

DensityMatrix::DensityMatrix(CMatrix entries, AssumeValid)
    : m_(std::move(entries)) {}

DensityMatrix DensityMatrix::basis(std::size_t dim, std::size_t k) {
  if (k >= dim) {
    throw InvalidArgument("basis state index " + std::to_string(k) +
                          " outside truncation of dimension " +
                          std::to_string(dim));
  }
  CMatrix m = CMatrix::Zero(dim, dim);
  m(k, k) = 1.0;
  return DensityMatrix(std::move(m), AssumeValid{});
}

DensityMatrix DensityMatrix::diagonal(std::span<const double> diag) {
  CMatrix m = CMatrix::Zero(diag.size(), diag.size());
  for (std::size_t j = 0; j < diag.size(); ++j) m(j, j) = diag[j];
  return DensityMatrix(std::move(m));
}

double DensityMatrix::min_eigenvalue() const {
  return min_hermitian_eigenvalue(m_);
}

//----------------------------------------------------------------------------
// Generator
//----------------------------------------------------------------------------

CMatrix apply_generator(const OperatorSet& ops, const CMatrix& x) {
  const std::size_t d = ops.dim();
  require_square(x, d, "apply_generator");
  const double mu2 = ops.params().mu() * ops.params().mu();
  const double lam2 = ops.params().lambda() * ops.params().lambda();
  CMatrix out(d, d);
  for (std::size_t k = 0; k < d; ++k) {
    for (std::size_t j = 0; j < d; ++j) {
      Complex v = kI * (ops.hamiltonian(j) - ops.hamiltonian(k)) * x(j, k);
      v -= 0.5 * (mu2 * (ops.omega(j) + ops.omega(k)) +
                  lam2 * (ops.birth(j) + ops.birth(k))) *
           x(j, k);
      if (j > 0 && k > 0) {
        v += mu2 * ops.sqrt_omega(j) * ops.sqrt_omega(k) * x(j - 1, k - 1);
      }
      if (j + 1 < d && k + 1 < d) {
        v += lam2 * ops.sqrt_omega(j + 1) * ops.sqrt_omega(k + 1) *
             x(j + 1, k + 1);
      }
      out(j, k) = v;
    }
  }
  return out;
}

CMatrix apply_predual(const OperatorSet& ops, const CMatrix& rho) {
  const std::size_t d = ops.dim();
  require_square(rho, d, "apply_predual");
  const double mu2 = ops.params().mu() * ops.params().mu();
  const double lam2 = ops.params().lambda() * ops.params().lambda();
  CMatrix out(d, d);
  for (std::size_t k = 0; k < d; ++k) {
    for (std::size_t j = 0; j < d; ++j) {
      out(j, k) = predual_entry(ops, rho, j, k, mu2, lam2);
    }
  }
  return out;
}

CMatrix apply_predual(const OperatorSet& ops, const DensityMatrix& rho) {
  return apply_predual(ops, rho.matrix());
}

void apply_predual_sectors(const OperatorSet& ops, const CMatrix& rho,
                           CMatrix& out, std::span<const long> sectors) {
  const std::size_t d = ops.dim();
  require_square(rho, d, "apply_predual_sectors");
  if (out.rows() != rho.rows() || out.cols() != rho.cols()) {
    out.resize(rho.rows(), rho.cols());
  }
  const double mu2 = ops.params().mu() * ops.params().mu();
  const double lam2 = ops.params().lambda() * ops.params().lambda();
  const long dl = static_cast<long>(d);
  for (long m : sectors) {
    if (m <= -dl || m >= dl) continue;
    const std::size_t j0 = m < 0 ? static_cast<std::size_t>(-m) : 0;
    const std::size_t j1 = m < 0 ? d : d - static_cast<std::size_t>(m);
    for (std::size_t j = j0; j < j1; ++j) {
      const std::size_t k = static_cast<std::size_t>(static_cast<long>(j) + m);
      out(j, k) = predual_entry(ops, rho, j, k, mu2, lam2);
    }
  }
}

SectorStencil::SectorStencil(const OperatorSet& ops,
                             std::span<const long> sectors)
    : dim_(ops.dim()) {
  const long dl = static_cast<long>(dim_);
  std::vector<long> ms(sectors.begin(), sectors.end());
  std::sort(ms.begin(), ms.end());
  ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
  // Packed position of (j, k), or kNone when its sector is not tracked.
  std::vector<std::size_t> where(dim_ * dim_, kNone);
  for (long m : ms) {
    if (m <= -dl || m >= dl) {
      throw InvalidArgument("sector index outside the truncated space");
    }
    const std::size_t j0 = m < 0 ? static_cast<std::size_t>(-m) : 0;
    const std::size_t j1 = m < 0 ? dim_ : dim_ - static_cast<std::size_t>(m);
    for (std::size_t j = j0; j < j1; ++j) {
      const std::size_t k = static_cast<std::size_t>(static_cast<long>(j) + m);
      where[j + k * dim_] = rows_.size();
      rows_.push_back(j);
      cols_.push_back(k);
    }
  }
  const double mu2 = ops.params().mu() * ops.params().mu();
  const double lam2 = ops.params().lambda() * ops.params().lambda();
  const std::size_t n = rows_.size();
  self_.resize(n);
  up_coef_.assign(n, 0.0);
  down_coef_.assign(n, 0.0);
  up_.assign(n, kNone);
  down_.assign(n, kNone);
  partner_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = rows_[i];
    const std::size_t k = cols_[i];
    self_[i] = -kI * (ops.hamiltonian(j) - ops.hamiltonian(k)) -
               0.5 * (mu2 * (ops.omega(j) + ops.omega(k)) +
                      lam2 * (ops.birth(j) + ops.birth(k)));
    if (j + 1 < dim_ && k + 1 < dim_) {
      up_[i] = where[(j + 1) + (k + 1) * dim_];
      up_coef_[i] = mu2 * ops.sqrt_omega(j + 1) * ops.sqrt_omega(k + 1);
    }
    if (j > 0 && k > 0) {
      down_[i] = where[(j - 1) + (k - 1) * dim_];
      down_coef_[i] = lam2 * ops.sqrt_omega(j) * ops.sqrt_omega(k);
    }
    partner_[i] = where[k + j * dim_];
    if (j == k) diagonal_.push_back(i);
  }
}

void SectorStencil::pack(const CMatrix& rho, std::vector<Complex>& out) const {
  require_square(rho, dim_, "SectorStencil::pack");
  out.resize(rows_.size());
  for (std::size_t i = 0; i < rows_.size(); ++i) out[i] = rho(rows_[i], cols_[i]);
}

void SectorStencil::unpack(std::span<const Complex> packed, CMatrix& m) const {
  m.setZero(dim_, dim_);
  for (std::size_t i = 0; i < rows_.size(); ++i) m(rows_[i], cols_[i]) = packed[i];
}

void SectorStencil::apply(std::span<const Complex> in,
                          std::span<Complex> out) const {
  const std::size_t n = rows_.size();
  for (std::size_t i = 0; i < n; ++i) {
    Complex v = self_[i] * in[i];
    if (up_[i] != kNone) v += up_coef_[i] * in[up_[i]];
    if (down_[i] != kNone) v += down_coef_[i] * in[down_[i]];
    out[i] = v;
  }
}

void SectorStencil::symmetrize(std::span<Complex> packed) const {
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const std::size_t p = partner_[i];
    if (p == kNone || p < i) continue;
    const Complex avg = 0.5 * (packed[i] + std::conj(packed[p]));
    packed[i] = avg;
    packed[p] = std::conj(avg);
  }
}

Complex SectorStencil::trace(std::span<const Complex> packed) const {
  Complex t = 0.0;
  for (std::size_t i : diagonal_) t += packed[i];
  return t;
}

void SectorStencil::scale(std::span<Complex> packed, double factor) const {
  for (auto& v : packed) v *= factor;
}

//----------------------------------------------------------------------------
// Embedding
//----------------------------------------------------------------------------

CMatrix embed(const CMatrix& x, std::span<const double> pi) {
  require_square(x, pi.size(), "embed");
  require_weights(pi, pi.size());
  const std::size_t d = pi.size();
  std::vector<double> q(d);
  for (std::size_t j = 0; j < d; ++j) q[j] = std::sqrt(std::sqrt(pi[j]));
  CMatrix out(d, d);
  for (std::size_t k = 0; k < d; ++k) {
    for (std::size_t j = 0; j < d; ++j) out(j, k) = q[j] * q[k] * x(j, k);
  }
  return out;
}

CMatrix un_embed(const CMatrix& xi, std::span<const double> pi) {
  require_square(xi, pi.size(), "un_embed");
  require_weights(pi, pi.size());
  const std::size_t d = pi.size();
  std::vector<double> q(d);
  for (std::size_t j = 0; j < d; ++j) q[j] = std::sqrt(std::sqrt(pi[j]));
  CMatrix out(d, d);
  for (std::size_t k = 0; k < d; ++k) {
    for (std::size_t j = 0; j < d; ++j) out(j, k) = xi(j, k) / (q[j] * q[k]);
  }
  return out;
}

CMatrix embedded_sector_matrix(const OperatorSet& ops,
                               std::span<const double> pi, long m) {
  const std::size_t d = ops.dim();
  require_weights(pi, d);
  const long dl = static_cast<long>(d);
  if (m <= -dl || m >= dl) {
    throw InvalidArgument("sector index outside the truncated space");
  }
  const std::size_t len = d - static_cast<std::size_t>(m < 0 ? -m : m);
  const std::size_t row0 = m < 0 ? static_cast<std::size_t>(-m) : 0;
  auto col_of = [&](std::size_t i) {
    return static_cast<std::size_t>(static_cast<long>(row0 + i) + m);
  };
  CMatrix out = CMatrix::Zero(len, len);
  CMatrix probe = CMatrix::Zero(d, d);
  for (std::size_t a = 0; a < len; ++a) {
    probe.setZero();
    probe(row0 + a, col_of(a)) = 1.0;
    const CMatrix image = embed(apply_generator(ops, un_embed(probe, pi)), pi);
    for (std::size_t b = 0; b < len; ++b) out(b, a) = image(row0 + b, col_of(b));
  }
  return out;
}

//----------------------------------------------------------------------------
// Two-photon equivalence
//----------------------------------------------------------------------------

std::string to_string(Parity p) { return p == Parity::even ? "even" : "odd"; }

Parity parse_parity(const std::string& s) {
  if (s == "even") return Parity::even;
  if (s == "odd") return Parity::odd;
  throw InvalidArgument("parity must be 'even' or 'odd', got '" + s + "'");
}

double parity_r(Parity p) { return p == Parity::even ? 0.5 : 1.5; }

EquivalenceReport two_photon_check(const ModelParams& params, double xi_plus,
                                   double xi_minus, Parity parity,
                                   const TruncationSpec& trunc) {
  trunc.validate();
  if (std::abs(params.r() - parity_r(parity)) > 1e-14) {
    throw InvalidArgument("parity " + to_string(parity) + " requires r = " +
                          std::to_string(parity_r(parity)) + ", got r = " +
                          std::to_string(params.r()));
  }
  if (trunc.dim < 3) {
    throw InvalidArgument("two_photon_check needs dim >= 3");
  }
  const std::size_t d = trunc.dim;
  const std::size_t big = 2 * d;
  const OperatorSet ops(params, d);

  // Standard oscillator on 2 dim levels.
  RMatrix a = RMatrix::Zero(big, big);
  for (std::size_t n = 1; n < big; ++n) {
    a(n - 1, n) = std::sqrt(static_cast<double>(n));
  }
  const RMatrix a2 = a * a;
  const RMatrix a2p = a2.transpose();
  const RMatrix lower = a2p * a2;  // a+^2 a^2
  const RMatrix upper = a2 * a2p;  // a^2 a+^2
  const RMatrix kham = xi_minus * lower + xi_plus * upper;
  const double lam2 = params.lambda() * params.lambda();
  const double mu2 = params.mu() * params.mu();

  const std::size_t shift = parity == Parity::even ? 0 : 1;
  auto lift = [&](std::size_t k) { return 2 * k + shift; };

  // L_tp applied to the rank-one matrix unit |e_p><e_q|.
  auto tp_unit = [&](std::size_t p, std::size_t q) {
    CMatrix y = CMatrix::Zero(big, big);
    // i [K, y]
    for (std::size_t i = 0; i < big; ++i) {
      y(i, q) += kI * kham(i, p);
      y(p, i) -= kI * kham(q, i);
    }
    // -lam^2/2 (upper y - 2 a2 y a2p + y upper)
    // -mu^2/2 (lower y - 2 a2p y a2 + y lower)
    for (std::size_t i = 0; i < big; ++i) {
      y(i, q) -= 0.5 * (lam2 * upper(i, p) + mu2 * lower(i, p));
      y(p, i) -= 0.5 * (lam2 * upper(q, i) + mu2 * lower(q, i));
    }
    for (std::size_t i = 0; i < big; ++i) {
      const double s = a2(i, p);
      const double t = a2p(i, p);
      for (std::size_t l = 0; l < big; ++l) {
        y(i, l) += lam2 * s * a2(l, q) + mu2 * t * a2p(l, q);
      }
    }
    return y;
  };

  std::vector<Complex> lhs;
  std::vector<Complex> rhs;
  const std::size_t probe_max = d - 1;
  CMatrix x = CMatrix::Zero(d, d);
  std::size_t probes = 0;
  for (std::size_t j = 0; j < probe_max; ++j) {
    for (std::size_t k = 0; k < probe_max; ++k) {
      x.setZero();
      x(j, k) = 1.0;
      const CMatrix reference = apply_generator(ops, x);
      const CMatrix lifted = tp_unit(lift(j), lift(k));
      for (std::size_t c = 0; c < d; ++c) {
        for (std::size_t b = 0; b < d; ++b) {
          const Complex t = lifted(lift(b), lift(c));
          const Complex u = reference(b, c);
          if (t == 0.0 && u == 0.0) continue;
          lhs.push_back(t);
          rhs.push_back(u);
        }
      }
      ++probes;
    }
  }

  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    num += (std::conj(rhs[i]) * lhs[i]).real();
    den += std::norm(rhs[i]);
  }
  EquivalenceReport rep;
  rep.parity = parity;
  rep.r = params.r();
  rep.xi_plus = xi_plus;
  rep.xi_minus = xi_minus;
  rep.probes = probes;
  rep.proportionality_constant = den > 0.0 ? num / den : 0.0;
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    const Complex fit = rep.proportionality_constant * rhs[i];
    const double dev = std::abs(lhs[i] - fit);
    rep.max_abs_residual = std::max(rep.max_abs_residual, dev);
    // Entries reach ~omega^2, so absolute roundoff scales with them.
    rep.max_residual =
        std::max(rep.max_residual, dev / std::max(1.0, std::abs(fit)));
  }
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "measured U* L_tp(U x U*) U = c L(x) with xi = zeta, "
                "c = %.12g; the factor multiplies the quadratic-oscillator "
                "generator, i.e. the restricted two-photon generator is c "
                "times L (the orientation 'U L(U* x U) U* = 4 L_tp(p x p) "
                "for xi = 4 zeta' is not what the operator definitions give)",
                rep.proportionality_constant);
  rep.convention = buf;
  return rep;
}

}  // namespace qho
