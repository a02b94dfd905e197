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

#ifndef QHO_ORACLE_HPP
#define QHO_ORACLE_HPP

// Reference values computed along independent routes (quadrature, special
// functions, closed forms). Used by the self-test and the unit tests only.

#include <cstddef>
#include <vector>

namespace qho::oracle {

// 2 nu^{-2r} int_0^nu s^{2r-1} / (1 - s^2) ds  (equals Phi(nu^2, 1, r)).
double lerch_integral(double nu, double r);

// 2 nu^{-2(r+1)} int_0^nu s^{2r-1} (nu^2 - s^2) / (1 - s^2) ds, which equals
// sum_k nu^{2k} / ((k + r)(k + r + 1)).
double telescoped_integral(double nu, double r);

// Squared minimizer entries from the binomial / Gamma-ratio closed form,
//   y_j^2 ~ nu^{2j} C(j+m, m) Gamma(m+r) Gamma(j+r) / (Gamma(r) Gamma(j+m+r)),
// normalized to unit sum. Evaluated in log space.
std::vector<double> minimizer_squares(double nu, double r, std::size_t m,
                                      std::size_t dim);

// sum_{j>=k} 1/((j+1)(j+r)) via digamma (trigamma when r = 1).
double transient_tail(std::size_t k, double r);

}  // namespace qho::oracle

#endif  // QHO_ORACLE_HPP
