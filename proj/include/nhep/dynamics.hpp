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
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include "nhep/errors.hpp"
#include "nhep/model.hpp"
#include "nhep/parallel.hpp"
#include "nhep/sideband.hpp"
#include "nhep/state.hpp"

/// Time evolution: closed-form propagation under the effective two-level
/// Hamiltonian and fixed-step RK4 integration of the flux-modulated
/// qubit-resonator Hamiltonian in a truncated Fock space.
namespace nhep::dynamics {

using model::NhParams;
using sideband::ModulationParams;

struct Trajectory {
  std::vector<double> times;
  std::vector<PureState> states;  ///< unnormalized
  std::vector<double> norms;      ///< no-jump probability ||psi(t)||^2

  std::size_t size() const { return times.size(); }
};

struct DecayRates {
  double kappa_q = 0.0;
  double kappa_f = 0.0;

  void validate() const {
    nhep::detail::require(std::isfinite(kappa_q) && kappa_q >= 0.0, "DecayRates: kappa_q must be >= 0");
    nhep::detail::require(std::isfinite(kappa_f) && kappa_f >= 0.0, "DecayRates: kappa_f must be >= 0");
  }
};

namespace detail {

inline std::vector<double> time_grid(double t_max, double dt, const char* where) {
  nhep::detail::require(std::isfinite(dt) && dt > 0.0, std::string(where) + ": dt must be > 0");
  nhep::detail::require(std::isfinite(t_max) && t_max >= 0.0, std::string(where) + ": t_max must be >= 0");
  const auto steps = static_cast<std::size_t>(std::floor(t_max / dt * (1.0 + 1e-12)));
  std::vector<double> t(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) t[k] = static_cast<double>(k) * dt;
  return t;
}

}  // namespace detail

/// exp(-i H t) on the excitation-number subspace, closed form.
inline Eigen::Matrix2cd subspace_propagator(const NhParams& p, double t) {
  p.validate();
  const double x = p.coupling();
  const double kappa = p.kappa();
  const cplx z = 0.5 * model::detail::rabi_gap(x, kappa) * t;
  const cplx s = model::detail::sinc(z);
  const cplx c = std::cos(z);
  Eigen::Matrix2cd u;
  u << c + 0.25 * kappa * t * s, -kI * x * t * s,
       -kI * x * t * s, c - 0.25 * kappa * t * s;
  return std::exp(-kI * p.mean_energy() * t) * u;
}

/// Samples exp(-i H t) psi0 on t = 0, dt, 2 dt, ... <= t_max. Each sample is
/// evaluated directly from the closed form, so no error accumulates.
inline Trajectory propagate_effective(const NhParams& p, const PureState& psi0, double t_max, double dt) {
  p.validate();
  nhep::detail::require(psi0.dim() == 2, "propagate_effective: initial state must live on the two-level subspace");
  Trajectory tr;
  tr.times = detail::time_grid(t_max, dt, "propagate_effective");
  for (double t : tr.times) {
    PureState s(subspace_propagator(p, t) * psi0.amplitudes, basis::single_excitation(p.n));
    tr.norms.push_back(s.norm_squared());
    tr.states.push_back(std::move(s));
  }
  return tr;
}

/// Starts from |e,n-1>.
inline Trajectory propagate_effective(const NhParams& p, double t_max, double dt) {
  return propagate_effective(p, PureState(Eigen::Vector2cd(1.0, 0.0), basis::single_excitation(p.n)), t_max, dt);
}

// ---------------------------------------------------------------------------
// Full modulated Hamiltonian

/// Basis of the truncated qubit-resonator space; index q (cutoff + 1) + m
/// with q = 0 for |g>, 1 for |e>.
inline Labels full_basis(int cutoff) {
  Labels l;
  for (const char* q : {"g", "e"})
    for (int m = 0; m <= cutoff; ++m) l.push_back("|" + std::string(q) + "," + std::to_string(m) + ">");
  return l;
}

inline Eigen::Index full_index(bool excited, int photons, int cutoff) {
  return (excited ? 1 : 0) * (cutoff + 1) + photons;
}

inline PureState full_basis_state(bool excited, int photons, int cutoff) {
  nhep::detail::require(cutoff >= 1 && photons >= 0 && photons <= cutoff, "full_basis_state: photon number outside cutoff");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(2 * (cutoff + 1));
  v(full_index(excited, photons, cutoff)) = 1.0;
  return PureState(std::move(v), full_basis(cutoff));
}

/// Lift c1|e,0> + c2|g,1> into the truncated Fock space.
inline PureState embed_full(const PureState& two_level, int cutoff) {
  nhep::detail::require(two_level.dim() == 2, "embed_full: expected a state on {|e,0>, |g,1>}");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(2 * (cutoff + 1));
  v(full_index(true, 0, cutoff)) = two_level[0];
  v(full_index(false, 1, cutoff)) = two_level[1];
  return PureState(std::move(v), full_basis(cutoff));
}

/// 2 pi / (40 max(nu, |delta_r|)).
inline double default_time_step(const ModulationParams& m) {
  return 2.0 * kPi / (40.0 * std::max(m.nu, std::abs(m.delta_r)));
}

inline double max_time_step(const ModulationParams& m) { return 2.0 * kPi / (20.0 * m.nu); }

inline constexpr double kLeakageThreshold = 1e-6;

namespace detail {

/// out = -i H(t) psi.
inline void full_rhs(const ModulationParams& m, const DecayRates& d, double t, const Eigen::VectorXcd& psi,
                     Eigen::VectorXcd& out) {
  const int c = m.fock_cutoff;
  const int stride = c + 1;
  const cplx drive = m.g_r * std::exp(kI * (m.delta_r * t - m.mu() * std::sin(m.nu * t)));
  const cplx drive_c = std::conj(drive);
  for (int n = 0; n <= c; ++n) {
    const cplx g = psi(n);
    const cplx e = psi(stride + n);
    // decay: -i * (-i/2 rate) = -rate/2
    cplx hg = cplx(0.0, -0.5 * d.kappa_f * n) * g;
    cplx he = cplx(0.0, -0.5 * (d.kappa_q + d.kappa_f * n)) * e;
    // a^dag |g><e| maps |e,n-1> -> sqrt(n) |g,n>
    if (n >= 1) hg += drive * std::sqrt(static_cast<double>(n)) * psi(stride + n - 1);
    if (n < c) he += drive_c * std::sqrt(static_cast<double>(n + 1)) * psi(n + 1);
    out(n) = -kI * hg;
    out(stride + n) = -kI * he;
  }
}

inline int max_excitation(const PureState& psi, int cutoff) {
  int top = 0;
  for (int q = 0; q < 2; ++q)
    for (int n = 0; n <= cutoff; ++n)
      if (std::abs(psi[q * (cutoff + 1) + n]) > 0.0) top = std::max(top, q + n);
  return top;
}

}  // namespace detail

struct FullOptions {
  double dt = 0.0;              ///< 0 selects default_time_step
  std::size_t sample_every = 1; ///< record every k-th RK4 step
  double leakage_threshold = kLeakageThreshold;
};

/// Integrates i d/dt psi = H(t) psi with
///   H(t) = g_r e^{i(delta_r t - mu sin nu t)} a^dag |g><e| + h.c.
///          - i/2 kappa_q |e><e| - i/2 kappa_f a^dag a
/// using classical RK4 with a fixed step.
inline Trajectory propagate_full(const ModulationParams& m, const DecayRates& d, const PureState& psi0, double t_max,
                                 const FullOptions& opt = {}) {
  m.validate();
  d.validate();
  const int c = m.fock_cutoff;
  nhep::detail::require(psi0.dim() == 2 * (c + 1), "propagate_full: initial state does not match the Fock cutoff");
  nhep::detail::require(opt.sample_every >= 1, "propagate_full: sample_every must be >= 1");
  nhep::detail::require(detail::max_excitation(psi0, c) + 1 <= c,
                        "propagate_full: Fock cutoff must exceed the initial excitation number");
  const double dt = opt.dt > 0.0 ? opt.dt : default_time_step(m);
  if (dt > max_time_step(m) * (1.0 + 1e-12))
    throw InvalidArgument("propagate_full: dt exceeds 2 pi / (20 nu)");
  nhep::detail::require(std::isfinite(t_max) && t_max >= 0.0, "propagate_full: t_max must be >= 0");

  const auto steps = static_cast<std::size_t>(std::floor(t_max / dt * (1.0 + 1e-12)));
  const Labels labels = full_basis(c);
  Trajectory tr;
  Eigen::VectorXcd psi = psi0.amplitudes;
  const Eigen::Index dim = psi.size();
  Eigen::VectorXcd k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);

  auto record = [&](double t) {
    const double top = std::norm(psi(c)) + std::norm(psi(2 * c + 1));
    if (top > opt.leakage_threshold)
      throw NumericalFailure("propagate_full: population in the top Fock level exceeds the leakage threshold at t = " +
                             std::to_string(t));
    tr.times.push_back(t);
    tr.norms.push_back(psi.squaredNorm());
    tr.states.emplace_back(psi, labels);
  };

  record(0.0);
  for (std::size_t k = 1; k <= steps; ++k) {
    const double t = static_cast<double>(k - 1) * dt;
    detail::full_rhs(m, d, t, psi, k1);
    tmp = psi + 0.5 * dt * k1;
    detail::full_rhs(m, d, t + 0.5 * dt, tmp, k2);
    tmp = psi + 0.5 * dt * k2;
    detail::full_rhs(m, d, t + 0.5 * dt, tmp, k3);
    tmp = psi + dt * k3;
    detail::full_rhs(m, d, t + dt, tmp, k4);
    psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!psi.allFinite()) throw NumericalFailure("propagate_full: state became non-finite");
    if (k % opt.sample_every == 0 || k == steps) record(static_cast<double>(k) * dt);
  }
  return tr;
}

/// Largest amplitude change of the final state when dt is halved.
inline double step_halving_deviation(const ModulationParams& m, const DecayRates& d, const PureState& psi0,
                                     double t_max, double dt) {
  nhep::detail::require(dt > 0.0 && t_max > 0.0, "step_halving_deviation: dt and t_max must be > 0");
  // Shrink dt so that both runs end exactly at t_max.
  FullOptions coarse;
  coarse.dt = t_max / std::ceil(t_max / dt * (1.0 - 1e-12));
  coarse.sample_every = static_cast<std::size_t>(-1);
  FullOptions fine = coarse;
  fine.dt = 0.5 * coarse.dt;
  const Trajectory a = propagate_full(m, d, psi0, t_max, coarse);
  const Trajectory b = propagate_full(m, d, psi0, t_max, fine);
  return (a.states.back().amplitudes - b.states.back().amplitudes).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------
// Observables on trajectories

/// Conditional |e,0> population |psi_e0|^2 / ||psi||^2.
inline double conditional_e0(const PureState& psi) {
  const double total = psi.norm_squared();
  if (!(total > 0.0)) throw NumericalFailure("conditional_e0: state has vanished");
  if (psi.dim() == 2) return std::norm(psi[0]) / total;
  const int c = static_cast<int>(psi.dim() / 2) - 1;
  return std::norm(psi[full_index(true, 0, c)]) / total;
}

/// Total excited-qubit population sum_m |psi(e,m)|^2 (unnormalized).
inline double qubit_excited_population(const PureState& psi) {
  const Eigen::Index stride = psi.dim() / 2;
  return psi.amplitudes.tail(stride).squaredNorm();
}

/// Concurrence 2|c1||c2|/(|c1|^2+|c2|^2) of the {|e,0>, |g,1>} component.
inline double single_excitation_concurrence(const PureState& psi) {
  cplx a, b;
  if (psi.dim() == 2) {
    a = psi[0];
    b = psi[1];
  } else {
    const int c = static_cast<int>(psi.dim() / 2) - 1;
    a = psi[full_index(true, 0, c)];
    b = psi[full_index(false, 1, c)];
  }
  const double den = std::norm(a) + std::norm(b);
  if (!(den > 0.0)) return 0.0;
  return 2.0 * std::abs(a) * std::abs(b) / den;
}

/// Dominant angular frequency of a uniformly sampled signal: FFT peak of the
/// mean-removed series, zero-padded 8x, refined by parabolic interpolation.
inline double dominant_frequency(const std::vector<double>& values, double dt) {
  nhep::detail::require(values.size() >= 4, "dominant_frequency: need at least four samples");
  nhep::detail::require(dt > 0.0, "dominant_frequency: dt must be > 0");
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  std::size_t n = 1;
  while (n < 8 * values.size()) n <<= 1;
  std::vector<double> padded(n, 0.0);
  for (std::size_t i = 0; i < values.size(); ++i) padded[i] = values[i] - mean;
  Eigen::FFT<double> fft;
  std::vector<cplx> spec;
  fft.fwd(spec, padded);
  std::size_t best = 1;
  for (std::size_t k = 1; k < n / 2; ++k)
    if (std::abs(spec[k]) > std::abs(spec[best])) best = k;
  double shift = 0.0;
  if (best > 1 && best + 1 < n / 2) {
    const double a = std::abs(spec[best - 1]);
    const double b = std::abs(spec[best]);
    const double c = std::abs(spec[best + 1]);
    const double den = a - 2.0 * b + c;
    if (den != 0.0) shift = 0.5 * (a - c) / den;
  }
  return 2.0 * kPi * (static_cast<double>(best) + shift) / (static_cast<double>(n) * dt);
}

/// RMS of a difference signal after subtracting its centered moving average
/// over `window` samples (rounded up to an odd width); isolates oscillations
/// faster than the window.
inline double fast_oscillation_residual(const std::vector<double>& diff, std::size_t window) {
  nhep::detail::require(window >= 1, "fast_oscillation_residual: window must be >= 1");
  const std::size_t n = diff.size();
  if (n <= window) return 0.0;
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + diff[i];
  window |= 1;  // centered average needs an odd width
  if (n <= window) return 0.0;
  const std::size_t half = window / 2;
  double acc = 0.0;
  std::size_t used = 0;
  for (std::size_t i = half; i + window - half <= n; ++i) {
    const double avg = (prefix[i - half + window] - prefix[i - half]) / static_cast<double>(window);
    const double r = diff[i] - avg;
    acc += r * r;
    ++used;
  }
  return used ? std::sqrt(acc / static_cast<double>(used)) : 0.0;
}

// ---------------------------------------------------------------------------
// Full versus effective dynamics

/// 2 pi / |dE|, or 8 pi / |kappa| at the exceptional point.
inline double characteristic_time(const NhParams& p) {
  const cplx gap = model::detail::rabi_gap(p.coupling(), p.kappa());
  if (std::abs(gap) > 0.0) return 2.0 * kPi / std::abs(gap);
  nhep::detail::require(p.kappa() != 0.0, "characteristic_time: no time scale when omega = kappa = 0");
  return 8.0 * kPi / std::abs(p.kappa());
}

struct ComparisonSetup {
  double eta = 5.0;
  DecayRates decay{0.0, 0.005};
  double g_r = 2.0 * kPi * 2.5e-3;  ///< rad/ns
  double nu = 2.0 * kPi * 0.125;    ///< rad/ns; delta_r = order * nu
  int sideband_order = 1;
  int fock_cutoff = 3;
  double periods = 3.0;             ///< duration in characteristic times
  double dt = 0.0;                  ///< 0 selects default_time_step
  std::size_t sample_every = 1;
};

struct Comparison {
  ModulationParams modulation;
  double omega = 0.0;  ///< effective coupling J_k(mu) g_r
  std::vector<double> times, p_e0_effective, p_e0_full, conc_effective, conc_full;
  double max_population_deviation = 0.0;
  double max_concurrence_deviation = 0.0;
  /// RMS of the concurrence difference after removing its one-modulation-period moving average.
  double fast_residual = 0.0;
};

/// Propagates |e,0> under the modulated Hamiltonian tuned so that
/// J_k(mu) g_r = eta |kappa| / 4, and under the effective model on the same grid.
inline Comparison compare_full_effective(const ComparisonSetup& s) {
  s.decay.validate();
  const NhParams eff = NhParams::from_eta(s.eta, s.decay.kappa_q, s.decay.kappa_f);
  Comparison out;
  out.omega = eff.omega;
  const double mu = sideband::modulation_index_for(eff.omega, s.g_r, s.sideband_order);
  out.modulation = ModulationParams::resonant(s.g_r, s.nu, mu, s.sideband_order, s.fock_cutoff);
  FullOptions opt;
  opt.dt = s.dt;
  opt.sample_every = s.sample_every;
  const double t_max = s.periods * characteristic_time(eff);
  const Trajectory full =
      propagate_full(out.modulation, s.decay, full_basis_state(true, 0, s.fock_cutoff), t_max, opt);
  for (std::size_t i = 0; i < full.size(); ++i) {
    const double t = full.times[i];
    const PureState e = PureState(subspace_propagator(eff, t).col(0), basis::single_excitation(1));
    out.times.push_back(t);
    out.p_e0_effective.push_back(conditional_e0(e));
    out.p_e0_full.push_back(conditional_e0(full.states[i]));
    out.conc_effective.push_back(single_excitation_concurrence(e));
    out.conc_full.push_back(single_excitation_concurrence(full.states[i]));
    out.max_population_deviation =
        std::max(out.max_population_deviation, std::abs(out.p_e0_effective.back() - out.p_e0_full.back()));
    out.max_concurrence_deviation =
        std::max(out.max_concurrence_deviation, std::abs(out.conc_effective.back() - out.conc_full.back()));
  }
  std::vector<double> diff(out.times.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = out.conc_full[i] - out.conc_effective[i];
  if (out.times.size() > 2) {
    const double step = out.times[1] - out.times[0];
    const auto window = static_cast<std::size_t>(std::max(1.0, std::round(2.0 * kPi / s.nu / step)));
    out.fast_residual = fast_oscillation_residual(diff, window);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sideband map

struct SidebandMap {
  std::vector<double> mu;         ///< row axis
  std::vector<double> nu;         ///< column axis (rad/ns)
  std::vector<double> p_excited;  ///< row-major, mu.size() x nu.size()
  double duration = 0.0;

  double at(std::size_t i_mu, std::size_t j_nu) const { return p_excited[i_mu * nu.size() + j_nu]; }
};

/// Final qubit excited population after `duration` of modulation at every
/// (mu, nu) grid point, starting from |e,0>. base supplies g_r, delta_r and
/// the Fock cutoff; epsilon = mu nu at each point.
inline SidebandMap sideband_scan(const ModulationParams& base, const DecayRates& d, const std::vector<double>& mu_values,
                                 const std::vector<double>& nu_values, double duration, unsigned threads = 0) {
  nhep::detail::require(!mu_values.empty() && !nu_values.empty(), "sideband_scan: grid must be nonempty");
  nhep::detail::require(duration > 0.0, "sideband_scan: duration must be > 0");
  for (double v : nu_values) nhep::detail::require(v > 0.0, "sideband_scan: nu values must be > 0");
  SidebandMap out;
  out.mu = mu_values;
  out.nu = nu_values;
  out.duration = duration;
  out.p_excited.assign(mu_values.size() * nu_values.size(), 0.0);
  const std::size_t cols = nu_values.size();
  parallel_for(out.p_excited.size(), threads, [&](std::size_t idx) {
    ModulationParams m = base;
    m.nu = nu_values[idx % cols];
    m.epsilon = mu_values[idx / cols] * m.nu;
    FullOptions opt;
    opt.sample_every = static_cast<std::size_t>(-1);
    const PureState psi0 = full_basis_state(true, 0, m.fock_cutoff);
    const Trajectory tr = propagate_full(m, d, psi0, duration, opt);
    out.p_excited[idx] = qubit_excited_population(tr.states.back());
  });
  return out;
}

}  // namespace nhep::dynamics
