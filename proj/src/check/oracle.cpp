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

#include "qho/oracle.hpp"

#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>

namespace qho::oracle {

namespace {

template <typename F>
double integrate(F f, double a, double b) {
  using boost::math::quadrature::gauss_kronrod;
  return gauss_kronrod<double, 61>::integrate(f, a, b, 12, 1e-14);
}

}  // namespace

double lerch_integral(double nu, double r) {
  const double p = 2.0 * r - 1.0;
  const double v = integrate(
      [p](double s) { return std::pow(s, p) / (1.0 - s * s); }, 0.0, nu);
  return 2.0 * std::pow(nu, -2.0 * r) * v;
}

double telescoped_integral(double nu, double r) {
  const double p = 2.0 * r - 1.0;
  const double nu2 = nu * nu;
  const double v = integrate(
      [p, nu2](double s) {
        return std::pow(s, p) * (nu2 - s * s) / (1.0 - s * s);
      },
      0.0, nu);
  return 2.0 * std::pow(nu, -2.0 * (r + 1.0)) * v;
}

std::vector<double> minimizer_squares(double nu, double r, std::size_t m,
                                      std::size_t dim) {
  std::vector<double> logs(dim);
  const double md = static_cast<double>(m);
  for (std::size_t j = 0; j < dim; ++j) {
    const double jd = static_cast<double>(j);
    const double log_binom =
        std::lgamma(jd + md + 1.0) - std::lgamma(md + 1.0) - std::lgamma(jd + 1.0);
    logs[j] = 2.0 * jd * std::log(nu) + log_binom + std::lgamma(md + r) +
              std::lgamma(jd + r) - std::lgamma(r) - std::lgamma(jd + md + r);
  }
  const double top = logs[0];
  std::vector<double> out(dim);
  double sum = 0.0;
  for (std::size_t j = 0; j < dim; ++j) {
    out[j] = std::exp(logs[j] - top);
  }
  for (std::size_t j = dim; j-- > 0;) sum += out[j];
  for (auto& v : out) v /= sum;
  return out;
}

double transient_tail(std::size_t k, double r) {
  const double kd = static_cast<double>(k);
  if (std::abs(r - 1.0) < 1e-12) {
    return boost::math::trigamma(kd + 1.0);
  }
  // 1/((j+1)(j+r)) = (1/(j+1) - 1/(j+r)) / (r - 1)
  return (boost::math::digamma(kd + 1.0) - boost::math::digamma(kd + r)) /
         (1.0 - r);
}

}  // namespace qho::oracle
