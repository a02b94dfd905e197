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

#include "qho/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

namespace qho {

namespace {

// Sectors m with some nonzero rho_{j, j+m}.
std::vector<long> occupied_sectors(const CMatrix& rho) {
  const long d = rho.rows();
  std::vector<long> out;
  for (long m = -(d - 1); m < d; ++m) {
    const long j0 = m < 0 ? -m : 0;
    const long j1 = m < 0 ? d : d - m;
    for (long j = j0; j < j1; ++j) {
      if (rho(j, j + m) != 0.0) {
        out.push_back(m);
        break;
      }
    }
  }
  return out;
}

double top_occupancy(const CMatrix& rho) {
  const long d = rho.rows();
  double occ = rho(d - 1, d - 1).real();
  if (d >= 2) occ += rho(d - 2, d - 2).real();
  return occ;
}

// Integrates one sample interval in place. Returns the largest trace drift.
double integrate_segment(const SectorStencil& stencil,
                         std::vector<Complex>& y, double length, double dt) {
  const std::size_t steps =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(length / dt)));
  const double h = length / static_cast<double>(steps);
  const std::size_t n = y.size();
  std::vector<Complex> k1(n), k2(n), k3(n), k4(n), tmp(n);
  double drift = 0.0;
  for (std::size_t s = 0; s < steps; ++s) {
    stencil.apply(y, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    stencil.apply(tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    stencil.apply(tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
    stencil.apply(tmp, k4);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    stencil.symmetrize(y);
    const double tr = stencil.trace(y).real();
    const double dev = std::abs(tr - 1.0);
    drift = std::max(drift, dev);
    if (dev > 1e-13) stencil.scale(y, 1.0 / tr);
  }
  return drift;
}

}  // namespace

double stiffness_cap(const OperatorSet& ops) {
  const auto& p = ops.params();
  const double rate = p.lambda() * p.lambda() + p.mu() * p.mu() +
                      std::abs(p.zeta_plus()) + std::abs(p.zeta_minus());
  return 0.5 / (rate * ops.omega(ops.dim()));
}

StepControl StepControl::for_operators(const OperatorSet& ops) {
  StepControl ctl;
  ctl.dt_max = stiffness_cap(ops);
  return ctl;
}

void StepControl::validate(const OperatorSet& ops) const {
  const double cap = stiffness_cap(ops);
  if (!(dt_max > 0.0)) {
    throw InvalidArgument("dt_max must be positive");
  }
  if (dt_max > cap * (1.0 + 1e-12)) {
    throw InvalidArgument("dt_max " + std::to_string(dt_max) +
                          " exceeds the stiffness cap " + std::to_string(cap));
  }
  if (!(positivity_tol >= 0.0) || max_retries < 0) {
    throw InvalidArgument("invalid positivity tolerance or retry count");
  }
}

Trajectory evolve(const OperatorSet& ops, const DensityMatrix& rho0,
                  double t_final, const StepControl& ctl, double sample_every,
                  double tail_tol) {
  ctl.validate(ops);
  if (rho0.dim() != ops.dim()) {
    throw InvalidArgument("initial state dimension does not match operators");
  }
  if (!(t_final >= 0.0)) {
    throw InvalidArgument("t_final must be nonnegative");
  }
  if (!(sample_every > 0.0)) {
    throw InvalidArgument("sample_every must be positive");
  }

  Trajectory traj;
  auto record = [&](double t, const CMatrix& m, double drift) {
    const double lo = min_hermitian_eigenvalue(m);
    const double occ = top_occupancy(m);
    if (occ > tail_tol) {
      char msg[160];
      std::snprintf(msg, sizeof msg,
                    "top-two-level occupancy %.3g at t = %.6g exceeds "
                    "tail_tol %.3g",
                    occ, t, tail_tol);
      throw TruncationOverflow(msg);
    }
    traj.times.push_back(t);
    traj.states.emplace_back(m, DensityMatrix::AssumeValid{});
    traj.boundary_occupancy.push_back(occ);
    traj.trace_drift.push_back(drift);
    traj.min_eigenvalue.push_back(lo);
  };

  record(0.0, rho0.matrix(),
         std::abs(rho0.matrix().trace().real() - 1.0));
  if (t_final == 0.0) return traj;

  const std::vector<long> sectors = occupied_sectors(rho0.matrix());
  const SectorStencil stencil(ops, sectors);
  std::vector<Complex> y;
  stencil.pack(rho0.matrix(), y);

  const auto samples = static_cast<std::size_t>(
      std::ceil(t_final / sample_every - 1e-9));
  CMatrix dense(ops.dim(), ops.dim());
  double t_prev = 0.0;
  for (std::size_t i = 1; i <= samples; ++i) {
    const double t_next =
        i == samples ? t_final : static_cast<double>(i) * sample_every;
    double dt = ctl.dt_max;
    std::vector<Complex> trial;
    double drift = 0.0;
    double lo = 0.0;
    for (int attempt = 0;; ++attempt) {
      trial = y;
      drift = integrate_segment(stencil, trial, t_next - t_prev, dt);
      stencil.unpack(trial, dense);
      lo = min_hermitian_eigenvalue(dense);
      if (lo >= -ctl.positivity_tol) break;
      if (attempt >= ctl.max_retries) {
        throw NumericalError("positivity violated at t = " +
                             std::to_string(t_next) + " (min eigenvalue " +
                             std::to_string(lo) + ") after " +
                             std::to_string(ctl.max_retries) +
                             " step halvings");
      }
      dt *= 0.5;
    }
    y = std::move(trial);
    record(t_next, dense, drift);
    t_prev = t_next;
  }
  return traj;
}

double trace_distance(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InvalidArgument("trace_distance: dimension mismatch");
  }
  const CMatrix diff = a - b;
  const CMatrix herm = 0.5 * (diff + diff.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(herm, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  return trace_distance(a.matrix(), b.matrix());
}

double weighted_hs_norm(const CMatrix& x, std::span<const double> pi) {
  const std::size_t d = pi.size();
  if (static_cast<std::size_t>(x.rows()) != d ||
      static_cast<std::size_t>(x.cols()) != d) {
    throw InvalidArgument("weighted_hs_norm: dimension mismatch");
  }
  std::vector<double> s(d);
  for (std::size_t j = 0; j < d; ++j) {
    if (!(pi[j] > 0.0)) {
      throw InvalidArgument("weighted_hs_norm: weights must be positive");
    }
    s[j] = std::sqrt(pi[j]);
  }
  double acc = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    for (std::size_t j = 0; j < d; ++j) acc += s[j] * s[k] * std::norm(x(j, k));
  }
  return std::sqrt(acc);
}

CMatrix observable_form(const CMatrix& delta, std::span<const double> pi) {
  const std::size_t d = pi.size();
  if (static_cast<std::size_t>(delta.rows()) != d ||
      static_cast<std::size_t>(delta.cols()) != d) {
    throw InvalidArgument("observable_form: dimension mismatch");
  }
  CMatrix out(d, d);
  for (std::size_t k = 0; k < d; ++k) {
    for (std::size_t j = 0; j < d; ++j) {
      out(j, k) = delta(j, k) / std::sqrt(pi[j] * pi[k]);
    }
  }
  return out;
}

SupportProfile support_profile(const DensityMatrix& rho) {
  SupportProfile prof;
  const CMatrix& m = rho.matrix();
  prof.diagonal.resize(rho.dim());
  for (std::size_t j = 0; j < rho.dim(); ++j) prof.diagonal[j] = m(j, j).real();
  prof.min_eigenvalue = rho.min_eigenvalue();
  long k = -1;
  while (k + 1 < static_cast<long>(prof.diagonal.size()) &&
         prof.diagonal[static_cast<std::size_t>(k + 1)] > 1e-300) {
    ++k;
  }
  prof.witness_range = k;
  return prof;
}

std::vector<double> classical_apply(const ModelParams& params,
                                    std::span<const double> f,
                                    std::size_t dim) {
  if (f.size() != dim) {
    throw InvalidArgument("classical_apply: vector length does not match dim");
  }
  if (dim < 2) {
    throw InvalidArgument("classical_apply: dim must be at least 2");
  }
  const double lam2 = params.lambda() * params.lambda();
  const double mu2 = params.mu() * params.mu();
  const double r = params.r();
  std::vector<double> out(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    double v = 0.0;
    if (j + 1 < dim) v += lam2 * omega(j + 1, r) * (f[j + 1] - f[j]);
    if (j > 0) v += mu2 * omega(j, r) * (f[j - 1] - f[j]);
    out[j] = v;
  }
  return out;
}

namespace {

double witness_term(double j, double r) { return 1.0 / ((j + 1.0) * (j + r)); }

// sum_{j>=K} 1/((j+1)(j+r)) by Euler-Maclaurin: integral + f/2 - f'/12.
// The next correction is O(K^-5).
double euler_maclaurin_tail(double K, double r) {
  const double t = (r - 1.0) / (K + 1.0);
  const double integral =
      std::abs(t) < 1e-8 ? (1.0 - 0.5 * t) / (K + 1.0)
                         : std::log1p(t) / (r - 1.0);
  const double f = witness_term(K, r);
  const double fprime =
      -(2.0 * K + r + 1.0) / ((K + 1.0) * (K + 1.0) * (K + r) * (K + r));
  return integral + 0.5 * f - fprime / 12.0;
}

}  // namespace

double transient_tail(std::size_t k, double r) {
  if (!(r > 0.0)) throw InvalidArgument("transient_tail: r must be positive");
  const std::size_t cutoff = 10 * std::max<std::size_t>(k, 8);
  double tail = euler_maclaurin_tail(static_cast<double>(cutoff), r);
  for (std::size_t j = cutoff; j-- > k;) {
    tail += witness_term(static_cast<double>(j), r);
  }
  return tail;
}

TransientReport transient_witness(const ModelParams& params, std::size_t dim) {
  const double lam = params.lambda();
  const double mu = params.mu();
  if (std::abs(lam - mu) > 1e-14 * std::max(1.0, mu)) {
    throw InvalidArgument("transient_witness requires lambda = mu");
  }
  if (dim < 8) {
    throw InvalidArgument("transient_witness requires dim >= 8");
  }
  const double r = params.r();
  const std::size_t cutoff = 10 * dim;
  std::vector<double> x(dim);
  double tail = euler_maclaurin_tail(static_cast<double>(cutoff), r);
  for (std::size_t j = cutoff; j-- > 0;) {
    tail += witness_term(static_cast<double>(j), r);
    if (j < dim) x[j] = tail;
  }

  TransientReport rep;
  rep.image = classical_apply(params, x, dim);
  rep.entry0 = rep.image[0];
  for (std::size_t k = 1; k + 1 < dim; ++k) {
    rep.max_interior_residual =
        std::max(rep.max_interior_residual, std::abs(rep.image[k]));
  }
  rep.strictly_decreasing = x[dim - 1] > 0.0;
  for (std::size_t k = 1; k < dim; ++k) {
    if (!(x[k] < x[k - 1])) rep.strictly_decreasing = false;
  }
  rep.witness = std::move(x);
  return rep;
}

namespace {

std::vector<double> perturbation_norms(const Trajectory& traj,
                                       const DensityMatrix& reference,
                                       std::span<const double> pi) {
  std::vector<double> out;
  out.reserve(traj.states.size());
  for (const auto& s : traj.states) {
    out.push_back(weighted_hs_norm(
        observable_form(s.matrix() - reference.matrix(), pi), pi));
  }
  return out;
}

}  // namespace

DecayFit decay_rate(const Trajectory& traj, const DensityMatrix& reference,
                    std::span<const double> pi) {
  if (traj.times.empty()) {
    throw InvalidArgument("decay_rate: empty trajectory");
  }
  const std::vector<double> norms = perturbation_norms(traj, reference, pi);
  const double t_burn = 0.2 * traj.times.back();
  std::vector<double> ts;
  std::vector<double> ls;
  for (std::size_t i = 0; i < norms.size(); ++i) {
    if (traj.times[i] < t_burn) continue;
    if (!(norms[i] >= 1e-14)) break;
    ts.push_back(traj.times[i]);
    ls.push_back(std::log(norms[i]));
  }
  if (ts.size() < 10) {
    throw NumericalError(
        "decay_rate: fewer than 10 samples above the 1e-14 norm floor after "
        "burn-in (perturbation underflow)");
  }
  const double n = static_cast<double>(ts.size());
  double mt = 0.0, ml = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    mt += ts[i];
    ml += ls[i];
  }
  mt /= n;
  ml /= n;
  double stt = 0.0, stl = 0.0, sll = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    stt += (ts[i] - mt) * (ts[i] - mt);
    stl += (ts[i] - mt) * (ls[i] - ml);
    sll += (ls[i] - ml) * (ls[i] - ml);
  }
  DecayFit fit;
  const double slope = stl / stt;
  fit.rate = -slope;
  fit.r_squared = sll > 0.0 ? (stl * stl) / (stt * sll) : 1.0;
  fit.t_begin = ts.front();
  fit.t_end = ts.back();
  fit.samples = ts.size();
  return fit;
}

std::vector<double> interval_decay_rates(const Trajectory& traj,
                                         const DensityMatrix& reference,
                                         std::span<const double> pi) {
  const std::vector<double> norms = perturbation_norms(traj, reference, pi);
  std::vector<double> rates;
  for (std::size_t i = 1; i < norms.size(); ++i) {
    if (!(norms[i] > 0.0) || !(norms[i - 1] > 0.0)) break;
    rates.push_back(-std::log(norms[i] / norms[i - 1]) /
                    (traj.times[i] - traj.times[i - 1]));
  }
  return rates;
}

}  // namespace qho
