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

#ifndef QHO_DYNAMICS_HPP
#define QHO_DYNAMICS_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "qho/model.hpp"
#include "qho/operators.hpp"

namespace qho {

// Largest admissible RK4 step: 0.5 / ((lambda^2 + mu^2 + |zeta+| + |zeta-|)
// omega_dim). The generator's spectral radius grows like omega_dim.
double stiffness_cap(const OperatorSet& ops);

struct StepControl {
  double dt_max = 0.0;
  double positivity_tol = 1e-10;
  int max_retries = 4;

  // dt_max set to the stiffness cap.
  static StepControl for_operators(const OperatorSet& ops);

  void validate(const OperatorSet& ops) const;
};

// Samples of rho_t. boundary_occupancy is the population of the top two
// levels; trace_drift is the largest |tr rho - 1| seen during the segment
// ending at the sample, before renormalization.
struct Trajectory {
  std::vector<double> times;
  std::vector<DensityMatrix> states;
  std::vector<double> boundary_occupancy;
  std::vector<double> trace_drift;
  std::vector<double> min_eigenvalue;
};

// Fixed-step RK4 for d rho / dt = L_*(rho). Only the sectors rho_{j,j+m}
// present in rho0 are propagated (the generator never mixes sectors).
//
// After every step the state is re-symmetrized, and the trace is reset to
// one when it drifts by more than 1e-13. Positivity is monitored at each
// sample; a violation beyond ctl.positivity_tol repeats the segment with
// half the step, up to ctl.max_retries times, before NumericalError.
// Top-two-level occupancy above tail_tol raises TruncationOverflow.
Trajectory evolve(const OperatorSet& ops, const DensityMatrix& rho0,
                  double t_final, const StepControl& ctl, double sample_every,
                  double tail_tol);

// Half the trace norm of a - b.
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);
double trace_distance(const CMatrix& a, const CMatrix& b);

// (sum_jk pi_j^{1/2} pi_k^{1/2} |x_jk|^2)^{1/2}, the norm of
// rho^{1/4} x rho^{1/4} for an observable x.
double weighted_hs_norm(const CMatrix& x, std::span<const double> pi);

// Observable form of a density perturbation: delta_jk / sqrt(pi_j pi_k),
// i.e. rho^{-1/2} delta rho^{-1/2}. Its embedded norm is the one the
// Dirichlet form contracts.
CMatrix observable_form(const CMatrix& delta, std::span<const double> pi);

struct SupportProfile {
  std::vector<double> diagonal;
  double min_eigenvalue = 0.0;
  // Largest k with diag_0..diag_k all above 1e-300; -1 when diag_0 is not.
  long witness_range = -1;
};

SupportProfile support_profile(const DensityMatrix& rho);

// Birth-death generator
//   (A f)_j = lam^2 omega_{j+1} (f_{j+1} - f_j) + mu^2 omega_j (f_{j-1} - f_j)
// with the birth rate out of j = dim - 1 set to zero.
std::vector<double> classical_apply(const ModelParams& params,
                                    std::span<const double> f,
                                    std::size_t dim);

struct TransientReport {
  std::vector<double> witness;  // X_k = sum_{j>=k} 1/((j+1)(j+r))
  std::vector<double> image;    // classical_apply(witness)
  double entry0 = 0.0;          // expected -lambda^2
  double max_interior_residual = 0.0;  // over 1 <= k <= dim - 2
  bool strictly_decreasing = false;
};

// Requires lambda = mu and dim >= 8.
TransientReport transient_witness(const ModelParams& params, std::size_t dim);

// sum_{j>=k} 1/((j+1)(j+r)): direct summation up to 10 * max(k, 1) plus an
// Euler-Maclaurin remainder.
double transient_tail(std::size_t k, double r);

struct DecayFit {
  double rate = 0.0;
  double r_squared = 0.0;
  double t_begin = 0.0;
  double t_end = 0.0;
  std::size_t samples = 0;
};

// Least-squares slope of -log ||observable_form(rho_t - reference)||_pi over
// the samples after the first 20% of the time window. The window ends at the
// first sample whose norm falls below 1e-14; fewer than 10 usable samples is
// a NumericalError.
DecayFit decay_rate(const Trajectory& traj, const DensityMatrix& reference,
                    std::span<const double> pi);

// Log-norm decay rate between consecutive samples, same norm as decay_rate.
std::vector<double> interval_decay_rates(const Trajectory& traj,
                                         const DensityMatrix& reference,
                                         std::span<const double> pi);

}  // namespace qho

#endif  // QHO_DYNAMICS_HPP
