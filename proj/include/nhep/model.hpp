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
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "nhep/errors.hpp"
#include "nhep/state.hpp"

/// Closed-form eigensystem and no-jump dynamics of a decaying qubit coupled
/// to a decaying resonator mode,
///
///   H = Omega (a^dag |g><e| + a |e><g|) - i/2 kappa_q |e><e| - i/2 kappa_f a^dag a,
///
/// restricted to the excitation-number subspace {|e,n-1>, |g,n>}. Inside that
/// subspace H = c I + [[i kappa/4, x], [x, -i kappa/4]] with x = sqrt(n) Omega,
/// kappa = kappa_f - kappa_q and c the mean complex energy, so every quantity
/// below is a function of x, kappa and c only.
namespace nhep::model {

struct NhParams {
  double omega = 0.0;    ///< coupling strength (rad/ns)
  double kappa_q = 0.0;  ///< qubit decay rate (1/ns)
  double kappa_f = 0.0;  ///< resonator decay rate (1/ns)
  int n = 1;             ///< excitation number

  double kappa() const { return kappa_f - kappa_q; }
  double gamma() const { return kappa_f + kappa_q; }
  double coupling() const { return std::sqrt(static_cast<double>(n)) * omega; }

  /// 4 sqrt(n) Omega / |kappa|; empty when kappa == 0 (Hermitian-gap regime).
  std::optional<double> eta() const {
    if (kappa() == 0.0) return std::nullopt;
    return 4.0 * coupling() / std::abs(kappa());
  }

  /// Mean of the two subspace energies, -i (kappa_q + (2n-1) kappa_f) / 4.
  /// For n = 1 this is -i gamma / 4.
  cplx mean_energy() const { return cplx(0.0, -0.25 * (kappa_q + (2.0 * n - 1.0) * kappa_f)); }

  void validate() const {
    nhep::detail::require(std::isfinite(omega) && omega >= 0.0, "NhParams: omega must be finite and >= 0");
    nhep::detail::require(std::isfinite(kappa_q) && kappa_q >= 0.0, "NhParams: kappa_q must be finite and >= 0");
    nhep::detail::require(std::isfinite(kappa_f) && kappa_f >= 0.0, "NhParams: kappa_f must be finite and >= 0");
    nhep::detail::require(n >= 1, "NhParams: excitation number must be >= 1");
  }

  /// Parameters at rescaled coupling eta for fixed decay rates.
  static NhParams from_eta(double eta, double kappa_q, double kappa_f, int n = 1) {
    const double k = kappa_f - kappa_q;
    nhep::detail::require(k != 0.0, "NhParams::from_eta: eta is undefined when kappa_f == kappa_q");
    nhep::detail::require(std::isfinite(eta) && eta >= 0.0, "NhParams::from_eta: eta must be finite and >= 0");
    NhParams p{eta * std::abs(k) / (4.0 * std::sqrt(static_cast<double>(n))), kappa_q, kappa_f, n};
    p.validate();
    return p;
  }
};

struct EigenSystem {
  cplx e_plus;
  cplx e_minus;
  cplx gap;  ///< e_plus - e_minus
  PureState phi_plus;
  PureState phi_minus;
  bool degenerate = false;
};

namespace detail {

/// Vacuum-Rabi gap 2 sqrt(x^2 - kappa^2/16). The radicand is real, so the
/// result is either real >= 0 or purely imaginary with Im > 0; this is the
/// principal branch with the Re >= 0 / Im >= 0 tie-break.
inline cplx rabi_gap(double x, double kappa) {
  const double q = std::abs(kappa) / 4.0;
  const double radicand = (x - q) * (x + q);
  if (radicand >= 0.0) return {2.0 * std::sqrt(radicand), 0.0};
  return {0.0, 2.0 * std::sqrt(-radicand)};
}

/// Right eigenvector of [[i kappa/4, x], [x, -i kappa/4]] for eigenvalue
/// lambda, normalized and phased so the upper component is real >= 0.
inline Eigen::Vector2cd subspace_eigenvector(double x, double kappa, cplx lambda, bool plus_branch) {
  const cplx shift(0.0, kappa / 4.0);
  // Two algebraically equivalent forms; keep the better-conditioned one so
  // that x -> 0 still yields the bare kets.
  Eigen::Vector2cd a(x, lambda - shift);
  Eigen::Vector2cd b(lambda + shift, x);
  Eigen::Vector2cd v = a.norm() >= b.norm() ? a : b;
  const double nv = v.norm();
  if (!(nv > 0.0)) {
    // x == 0 and kappa == 0: any basis works; keep {|e>, |g>} ordering.
    v = plus_branch ? Eigen::Vector2cd(1.0, 0.0) : Eigen::Vector2cd(0.0, 1.0);
  } else {
    v /= nv;
  }
  const double tiny = 1e-300;
  if (std::abs(v(0)) > tiny) {
    v *= std::conj(v(0)) / std::abs(v(0));
    v(0) = std::abs(v(0));
  } else {
    v *= std::conj(v(1)) / std::abs(v(1));
  }
  return v;
}

/// Shared by the qubit-resonator and two-qubit models.
inline EigenSystem eigen_from_subspace(double x, double kappa, cplx mean, double omega_scale, Labels labels) {
  const cplx gap = rabi_gap(x, kappa);
  EigenSystem es;
  es.gap = gap;
  es.e_plus = mean + 0.5 * gap;
  es.e_minus = mean - 0.5 * gap;
  es.phi_plus = PureState(subspace_eigenvector(x, kappa, 0.5 * gap, true), labels);
  es.phi_minus = PureState(subspace_eigenvector(x, kappa, -0.5 * gap, false), labels);
  const double scale = std::max(omega_scale, std::abs(kappa));
  es.degenerate = scale > 0.0 && std::abs(gap) < 1e-12 * scale;
  return es;
}

/// 2 x |Gamma| / (|Gamma|^2 + x^2), Gamma = -i kappa/4 +- gap/2.
inline double coefficient_concurrence(double x, cplx gamma_coeff) {
  const double g = std::abs(gamma_coeff);
  const double den = g * g + x * x;
  if (!(den > 0.0)) return 0.0;
  return std::min(1.0, 2.0 * x * g / den);
}

inline cplx sinc(cplx z) {
  if (std::abs(z) < 1e-4) {
    const cplx z2 = z * z;
    return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
  }
  return std::sin(z) / z;
}

/// exp(-i M t)|upper> for the traceless subspace generator M, written with
/// a complex sinc so the exceptional point needs no special case.
inline Eigen::Vector2cd traceless_propagation(double x, double kappa, cplx gap, double t) {
  const cplx z = 0.5 * gap * t;
  const cplx s = sinc(z);
  return {std::cos(z) + 0.25 * kappa * t * s, -kI * x * t * s};
}

}  // namespace detail

/// The 2x2 subspace Hamiltonian in the basis {|e,n-1>, |g,n>}.
inline Eigen::Matrix2cd subspace_hamiltonian(const NhParams& p) {
  p.validate();
  const double x = p.coupling();
  Eigen::Matrix2cd h;
  h << cplx(0.0, -0.5 * (p.kappa_q + (p.n - 1.0) * p.kappa_f)), x,
       x, cplx(0.0, -0.5 * p.n * p.kappa_f);
  return h;
}

/// Eigenenergies E_+- = c +- dE/2 with right eigenvectors
/// N (sqrt(n) Omega |e,n-1> + Gamma_+- |g,n>), Gamma_+- = -i kappa/4 +- dE/2.
/// Gamma coincides with E_+- when n = 1 and kappa_q = 0.
inline EigenSystem eigen_system(const NhParams& p) {
  p.validate();
  return detail::eigen_from_subspace(p.coupling(), p.kappa(), p.mean_energy(), p.omega,
                                     basis::single_excitation(p.n));
}

/// Gamma_+- coefficients multiplying |g,n> in the unnormalized eigenvectors.
inline std::pair<cplx, cplx> eigen_coefficients(const NhParams& p) {
  const cplx gap = detail::rabi_gap(p.coupling(), p.kappa());
  const cplx shift(0.0, -p.kappa() / 4.0);
  return {shift + 0.5 * gap, shift - 0.5 * gap};
}

struct ConcurrencePair {
  double plus = 0.0;
  double minus = 0.0;
};

/// Concurrence of each eigenstate, 2 sqrt(n) Omega |Gamma| / (|Gamma|^2 + n Omega^2).
inline ConcurrencePair eigen_concurrence(const NhParams& p) {
  p.validate();
  const auto [gp, gm] = eigen_coefficients(p);
  return {detail::coefficient_concurrence(p.coupling(), gp), detail::coefficient_concurrence(p.coupling(), gm)};
}

/// Unnormalized exp(-i H t)|e,n-1>; its squared norm is the no-jump probability.
inline PureState propagated_state(const NhParams& p, double t) {
  p.validate();
  nhep::detail::require(std::isfinite(t) && t >= 0.0, "propagated_state: t must be >= 0");
  const double x = p.coupling();
  const cplx gap = detail::rabi_gap(x, p.kappa());
  Eigen::Vector2cd v = detail::traceless_propagation(x, p.kappa(), gap, t);
  v *= std::exp(-kI * p.mean_energy() * t);
  return PureState(v, basis::single_excitation(p.n));
}

/// Normalized no-jump state starting from |e,n-1>.
inline PureState no_jump_state(const PureState& propagated) { return propagated.normalized(); }

inline PureState no_jump_state(const NhParams& p, double t) {
  p.validate();
  nhep::detail::require(std::isfinite(t) && t >= 0.0, "no_jump_state: t must be >= 0");
  const double x = p.coupling();
  const cplx gap = detail::rabi_gap(x, p.kappa());
  return PureState(detail::traceless_propagation(x, p.kappa(), gap, t), basis::single_excitation(p.n)).normalized();
}

/// sin(2 theta), theta = arctan |upper-to-lower amplitude ratio|.
inline double no_jump_concurrence(const NhParams& p, double t) {
  p.validate();
  nhep::detail::require(std::isfinite(t) && t >= 0.0, "no_jump_concurrence: t must be >= 0");
  const double x = p.coupling();
  const Eigen::Vector2cd v = detail::traceless_propagation(x, p.kappa(), detail::rabi_gap(x, p.kappa()), t);
  const double theta = std::atan2(std::abs(v(1)), std::abs(v(0)));
  return std::sin(2.0 * theta);
}

struct NoJumpProbability {
  double p_nojump = 1.0;  ///< probability that no decay event occurred
  double p_e0 = 1.0;      ///< conditional |e,n-1> population
};

inline NoJumpProbability no_jump_probability(const NhParams& p, double t) {
  const PureState psi = propagated_state(p, t);
  const double total = psi.norm_squared();
  return {total, std::norm(psi[0]) / total};
}

// ---------------------------------------------------------------------------
// Two decaying qubits with swap coupling, restricted to {|e1,g2>, |g1,e2>}.

struct TwoQubitNhParams {
  double omega = 0.0;
  double kappa_1 = 0.0;
  double kappa_2 = 0.0;

  double kappa() const { return kappa_2 - kappa_1; }
  std::optional<double> eta() const {
    if (kappa() == 0.0) return std::nullopt;
    return 4.0 * omega / std::abs(kappa());
  }
  cplx mean_energy() const { return cplx(0.0, -0.25 * (kappa_1 + kappa_2)); }

  void validate() const {
    nhep::detail::require(std::isfinite(omega) && omega >= 0.0, "TwoQubitNhParams: omega must be finite and >= 0");
    nhep::detail::require(std::isfinite(kappa_1) && kappa_1 >= 0.0, "TwoQubitNhParams: kappa_1 must be >= 0");
    nhep::detail::require(std::isfinite(kappa_2) && kappa_2 >= 0.0, "TwoQubitNhParams: kappa_2 must be >= 0");
  }
};

struct TwoQubitEigen {
  EigenSystem system;
  ConcurrencePair concurrence;
};

inline Eigen::Matrix2cd subspace_hamiltonian(const TwoQubitNhParams& p) {
  p.validate();
  Eigen::Matrix2cd h;
  h << cplx(0.0, -0.5 * p.kappa_1), p.omega, p.omega, cplx(0.0, -0.5 * p.kappa_2);
  return h;
}

/// Eigenstates N (Omega |e1,g2> + Gamma_+- |g1,e2>), Gamma_+- = -i kappa/4 +- E_g/2,
/// E_g = 2 sqrt(Omega^2 - kappa^2/16), kappa = kappa_2 - kappa_1.
inline TwoQubitEigen two_qubit_eigen(const TwoQubitNhParams& p) {
  p.validate();
  TwoQubitEigen out;
  out.system = detail::eigen_from_subspace(p.omega, p.kappa(), p.mean_energy(), p.omega,
                                           basis::two_qubit_single_excitation());
  const cplx shift(0.0, -p.kappa() / 4.0);
  out.concurrence = {detail::coefficient_concurrence(p.omega, shift + 0.5 * out.system.gap),
                     detail::coefficient_concurrence(p.omega, shift - 0.5 * out.system.gap)};
  return out;
}

}  // namespace nhep::model
