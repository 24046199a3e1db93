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

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <string>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "nhep/errors.hpp"
#include "nhep/state.hpp"

/// Two-qubit entanglement measures on 4x4 density matrices in a product
/// basis ordered {|00>, |01>, |10>, |11>} (first factor is the qubit, second
/// the truncated resonator or the second qubit).
namespace nhep::entanglement {

/// sigma_y (x) sigma_y, with sigma_y = -i|0><1| + i|1><0|. Real symmetric.
inline Eigen::Matrix4cd sigma_yy() {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  m(0, 3) = -1.0;
  m(1, 2) = 1.0;
  m(2, 1) = 1.0;
  m(3, 0) = -1.0;
  return m;
}

namespace detail {

inline void require_two_qubit(const DensityMatrix& rho, const char* where) {
  nhep::detail::require(rho.dim() == 4, std::string(where) + ": expected a 4x4 density matrix");
}

/// Principal square root of a positive semidefinite Hermitian matrix.
/// Eigenvalues within rounding of zero are treated as exact zeros so that
/// rank-deficient inputs do not pick up sqrt(1e-17) ~ 3e-9 spurious weight.
inline Eigen::MatrixXcd psd_sqrt(const Eigen::MatrixXcd& m) {
  const Eigen::MatrixXcd h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  Eigen::VectorXd w = es.eigenvalues();
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, w.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = w(i) > floor ? std::sqrt(w(i)) : 0.0;
  return es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace detail

/// rho (sigma_y x sigma_y) rho* (sigma_y x sigma_y).
inline Eigen::Matrix4cd spin_flip_product(const DensityMatrix& rho) {
  detail::require_two_qubit(rho, "spin_flip_product");
  const Eigen::Matrix4cd r = rho.entries;
  const Eigen::Matrix4cd yy = sigma_yy();
  return r * yy * r.conjugate() * yy;
}

/// Square roots of the eigenvalues of spin_flip_product(rho), descending.
///
/// They are the singular values of A = sqrt(rho) Y sqrt(rho)*, because
/// A A^dag = sqrt(rho) Y rho* Y sqrt(rho) is similar to the spin-flip product.
/// Working with singular values avoids the square root of eigenvalues that
/// are zero up to rounding.
inline Eigen::Vector4d wootters_lambdas(const DensityMatrix& rho) {
  detail::require_two_qubit(rho, "concurrence");
  rho.validate_physical("concurrence");
  const Eigen::MatrixXcd s = detail::psd_sqrt(rho.entries);
  const Eigen::Matrix4cd a = s * sigma_yy() * s.conjugate();
  Eigen::Vector4d sv = Eigen::JacobiSVD<Eigen::Matrix4cd>(a).singularValues();
  std::sort(sv.data(), sv.data() + 4, std::greater<>());
  return sv;
}

/// Wootters concurrence max{l1 - l2 - l3 - l4, 0}, in [0, 1].
inline double concurrence(const DensityMatrix& rho) {
  const Eigen::Vector4d l = wootters_lambdas(rho);
  return std::clamp(l(0) - l(1) - l(2) - l(3), 0.0, 1.0);
}

/// Transpose the indices of one tensor factor (0 = first, 1 = second).
inline DensityMatrix partial_transpose(const DensityMatrix& rho, int subsystem) {
  detail::require_two_qubit(rho, "partial_transpose");
  nhep::detail::require(subsystem == 0 || subsystem == 1, "partial_transpose: subsystem index must be 0 or 1");
  Eigen::MatrixXcd out(4, 4);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d) {
          // rho_{(a b),(c d)}
          const cplx v = rho(2 * a + b, 2 * c + d);
          if (subsystem == 0)
            out(2 * c + b, 2 * a + d) = v;
          else
            out(2 * a + d, 2 * c + b) = v;
        }
  return DensityMatrix(std::move(out), rho.labels);
}

/// |sum of negative eigenvalues of the partial transpose|, in [0, 1/2].
inline double negativity(const DensityMatrix& rho) {
  detail::require_two_qubit(rho, "negativity");
  rho.validate_physical("negativity");
  const Eigen::VectorXd w = partial_transpose(rho, 1).eigenvalues();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i)
    if (w(i) < 0.0) sum += w(i);
  return std::min(0.5, -sum);
}

/// |<a|b>|^2 for states on the same labeled basis (normalizes both).
inline double state_fidelity(const PureState& a, const PureState& b) {
  nhep::detail::require(a.labels == b.labels, "state_fidelity: states live on different bases");
  const PureState ua = a.normalized();
  const PureState ub = b.normalized();
  return std::min(1.0, std::norm(ua.amplitudes.dot(ub.amplitudes)));
}

/// <psi| rho |psi> for normalized psi; Uhlmann fidelity against a pure state.
inline double state_fidelity(const PureState& psi, const DensityMatrix& rho) {
  nhep::detail::require(psi.labels == rho.labels, "state_fidelity: state and density matrix live on different bases");
  const PureState u = psi.normalized();
  return std::real(u.amplitudes.dot(rho.entries * u.amplitudes));
}

}  // namespace nhep::entanglement
