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

#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "nhep/errors.hpp"

namespace nhep {

using cplx = std::complex<double>;
using Labels = std::vector<std::string>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

namespace units {

// Configuration files carry "_mhz" values. Angular frequencies are quoted as
// f/2pi in MHz, pure rates as 1/us; internally everything is rad/ns or 1/ns.
inline double angular_from_mhz(double mhz) { return mhz * 2.0 * kPi * 1e-3; }
inline double rate_from_mhz(double mhz) { return mhz * 1e-3; }
inline double mhz_from_angular(double rad_per_ns) { return rad_per_ns / (2.0 * kPi * 1e-3); }
inline double mhz_from_rate(double per_ns) { return per_ns * 1e3; }

}  // namespace units

namespace basis {

/// {|e,n-1>, |g,n>}: the two-dimensional excitation-number subspace.
inline Labels single_excitation(int n = 1) {
  return {"|e," + std::to_string(n - 1) + ">", "|g," + std::to_string(n) + ">"};
}

/// {|g,n-1>, |g,n>, |e,n-1>, |e,n>}: the resonator truncated to two levels.
inline Labels qubit_resonator(int n = 1) {
  const auto lo = std::to_string(n - 1);
  const auto hi = std::to_string(n);
  return {"|g," + lo + ">", "|g," + hi + ">", "|e," + lo + ">", "|e," + hi + ">"};
}

/// {|gg>, |ge>, |eg>, |ee>}; the first letter is the first qubit.
inline Labels two_qubit() { return {"|gg>", "|ge>", "|eg>", "|ee>"}; }

/// Single-excitation block of the ancilla/test-qubit register after mapping.
inline Labels mapped_single_excitation() { return {"|e_a,g>", "|g_a,e>"}; }

inline Labels two_qubit_single_excitation() { return {"|e1,g2>", "|g1,e2>"}; }

// Positions of the single-excitation kets inside the four-dimensional
// product basis: |e,n-1> <-> |eg>, |g,n> <-> |ge>.
inline constexpr int kUpperIndex = 2;
inline constexpr int kLowerIndex = 1;

}  // namespace basis

/// Complex amplitudes over a labeled basis. Propagators return unnormalized
/// states whose norm carries the no-jump probability; use normalized() when
/// a physical ket is needed.
struct PureState {
  Eigen::VectorXcd amplitudes;
  Labels labels;

  PureState() = default;
  PureState(Eigen::VectorXcd amps, Labels names)
      : amplitudes(std::move(amps)), labels(std::move(names)) {
    detail::require(amplitudes.size() == static_cast<Eigen::Index>(labels.size()),
                    "PureState: amplitude count does not match basis labels");
  }

  Eigen::Index dim() const { return amplitudes.size(); }
  double norm_squared() const { return amplitudes.squaredNorm(); }
  double norm() const { return amplitudes.norm(); }
  cplx operator[](Eigen::Index i) const { return amplitudes(i); }

  PureState normalized() const {
    const double n = norm();
    if (!(n > 0.0) || !std::isfinite(n)) throw NumericalFailure("PureState: cannot normalize a zero or non-finite state");
    return PureState(amplitudes / n, labels);
  }

  bool is_normalized(double tol = 1e-12) const { return std::abs(norm_squared() - 1.0) <= tol; }
};

/// Square complex matrix over a labeled basis. The same type carries raw
/// tomography output (possibly non-positive) and physical states; use
/// validate_physical() where positivity is a precondition.
struct DensityMatrix {
  Eigen::MatrixXcd entries;
  Labels labels;

  DensityMatrix() = default;
  DensityMatrix(Eigen::MatrixXcd m, Labels names) : entries(std::move(m)), labels(std::move(names)) {
    detail::require(entries.rows() == entries.cols(), "DensityMatrix: matrix must be square");
    detail::require(entries.rows() == static_cast<Eigen::Index>(labels.size()),
                    "DensityMatrix: dimension does not match basis labels");
  }

  static DensityMatrix from_pure(const PureState& psi) {
    const PureState unit = psi.normalized();
    return DensityMatrix(unit.amplitudes * unit.amplitudes.adjoint(), unit.labels);
  }

  Eigen::Index dim() const { return entries.rows(); }
  cplx trace() const { return entries.trace(); }
  cplx operator()(Eigen::Index r, Eigen::Index c) const { return entries(r, c); }

  bool is_hermitian(double tol = 1e-10) const {
    return (entries - entries.adjoint()).cwiseAbs().maxCoeff() <= tol;
  }

  Eigen::VectorXd eigenvalues() const {
    const Eigen::MatrixXcd h = 0.5 * (entries + entries.adjoint());
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(h, Eigen::EigenvaluesOnly).eigenvalues();
  }

  /// Hermitian within 1e-10, unit trace within 1e-10, spectrum >= -1e-9.
  void validate_physical(const char* where) const {
    const std::string ctx(where);
    detail::require(is_hermitian(1e-10), ctx + ": density matrix is not Hermitian");
    detail::require(std::abs(trace() - 1.0) <= 1e-10, ctx + ": density matrix trace differs from 1");
    detail::require(eigenvalues().minCoeff() >= -1e-9, ctx + ": density matrix has a negative eigenvalue");
  }
};

/// Lift a state on {|e,n-1>, |g,n>} into the four-dimensional product basis.
inline PureState embed_single_excitation(const PureState& psi, Labels target = basis::qubit_resonator()) {
  detail::require(psi.dim() == 2, "embed_single_excitation: expected a two-component state");
  detail::require(target.size() == 4, "embed_single_excitation: target basis must be four-dimensional");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(4);
  v(basis::kUpperIndex) = psi[0];
  v(basis::kLowerIndex) = psi[1];
  return PureState(std::move(v), std::move(target));
}

inline DensityMatrix embed_single_excitation(const DensityMatrix& block, Labels target = basis::qubit_resonator()) {
  detail::require(block.dim() == 2, "embed_single_excitation: expected a 2x2 block");
  detail::require(target.size() == 4, "embed_single_excitation: target basis must be four-dimensional");
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
  const int idx[2] = {basis::kUpperIndex, basis::kLowerIndex};
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) m(idx[r], idx[c]) = block(r, c);
  return DensityMatrix(std::move(m), std::move(target));
}

}  // namespace nhep
