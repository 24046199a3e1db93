// Copyright 2026 The nhep Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

// Independent reference implementations used only by the tests. Each one
// takes a different numerical route from the library code it checks.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "nhep/state.hpp"

namespace oracle {

using nhep::cplx;

/// Dense matrix exponential (Pade scaling and squaring).
inline Eigen::MatrixXcd expm(const Eigen::MatrixXcd& a) { return a.exp(); }

/// exp(-i H t) v by dense exponentiation.
inline Eigen::VectorXcd evolve(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& v, double t) {
  return expm(cplx(0.0, -t) * h) * v;
}

/// Wootters concurrence from the eigenvalues of rho (Y x Y) rho* (Y x Y),
/// computed with a general non-Hermitian eigensolver.
inline double wootters_concurrence(const Eigen::Matrix4cd& rho) {
  // Extended precision keeps sqrt of rounding-level eigenvalues below 1e-9.
  using cl = std::complex<long double>;
  using M4 = Eigen::Matrix<cl, 4, 4>;
  M4 yy = M4::Zero();
  yy(0, 3) = -1.0L;
  yy(1, 2) = 1.0L;
  yy(2, 1) = 1.0L;
  yy(3, 0) = -1.0L;
  const M4 r = rho.cast<cl>();
  const M4 prod = r * yy * r.conjugate() * yy;
  Eigen::ComplexEigenSolver<M4> es(prod);
  std::vector<long double> l;
  for (int i = 0; i < 4; ++i) l.push_back(std::sqrt(std::max(0.0L, es.eigenvalues()(i).real())));
  std::sort(l.begin(), l.end(), std::greater<>());
  return static_cast<double>(std::max(0.0L, l[0] - l[1] - l[2] - l[3]));
}

/// |psi^T (sigma_y x sigma_y) psi| for a normalized two-qubit ket.
inline double pure_concurrence(const Eigen::Vector4cd& psi) {
  const Eigen::Vector4cd v = psi.normalized();
  return std::abs(-v(0) * v(3) - v(3) * v(0) + v(1) * v(2) + v(2) * v(1));
}

/// Naive O(N^2) discrete Fourier transform.
inline std::vector<cplx> dft(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<cplx> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    cplx acc = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      acc += x[j] * std::polar(1.0, -2.0 * nhep::kPi * static_cast<double>(k * j % n) / static_cast<double>(n));
    out[k] = acc;
  }
  return out;
}

/// J_n(x) = (1/pi) int_0^pi cos(n tau - x sin tau) d tau, composite trapezoid
/// rule (spectrally accurate for this periodic integrand).
inline double bessel_quadrature(int n, double x, int points = 4096) {
  double acc = 0.0;
  const double h = 2.0 * nhep::kPi / points;
  for (int k = 0; k < points; ++k) {
    const double tau = k * h;
    acc += std::cos(n * tau - x * std::sin(tau));
  }
  return acc * h / (2.0 * nhep::kPi);
}

/// Hand-rolled generators for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : eng_(seed) {}
  double uniform(double lo = 0.0, double hi = 1.0) { return lo + (hi - lo) * std::uniform_real_distribution<double>(0.0, 1.0)(eng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(eng_); }
  cplx complex_normal() { return {normal(), normal()}; }

  Eigen::VectorXcd unit_vector(int dim) {
    Eigen::VectorXcd v(dim);
    for (int i = 0; i < dim; ++i) v(i) = complex_normal();
    return v / v.norm();
  }

  /// Random mixed state of the given rank.
  Eigen::MatrixXcd density(int dim, int rank) {
    Eigen::MatrixXcd g(dim, rank);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < rank; ++j) g(i, j) = complex_normal();
    Eigen::MatrixXcd r = g * g.adjoint();
    return r / r.trace().real();
  }

  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace oracle
