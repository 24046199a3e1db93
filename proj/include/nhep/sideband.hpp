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

#include <unsupported/Eigen/FFT>

#include "nhep/errors.hpp"
#include "nhep/state.hpp"

/// Parametric sideband engineering: flux-modulated transmon frequency, its
/// harmonic content, Bessel-function sideband couplings.
namespace nhep::sideband {

inline constexpr double kBesselMaxArgument = 30.0;

/// Bessel function of the first kind J_order(x) for integer order >= 0 and
/// |x| <= 30.
///
/// Small arguments use the ascending series (terms added until they drop
/// below 1e-16 of the running sum). Otherwise Miller's downward recurrence is
/// started well above max(order, |x|) and normalized with the identity
/// J_0 + 2 sum_k J_2k = 1, which stays accurate to ~1e-15 over the whole
/// window without catastrophic cancellation.
inline double bessel_j(int order, double x) {
  nhep::detail::require(order >= 0, "bessel_j: order must be >= 0");
  nhep::detail::require(std::isfinite(x) && std::abs(x) <= kBesselMaxArgument,
                        "bessel_j: |x| must be <= 30");
  if (x == 0.0) return order == 0 ? 1.0 : 0.0;
  const double sign = (x < 0.0 && (order % 2 == 1)) ? -1.0 : 1.0;
  const double ax = std::abs(x);

  if (ax <= 1.0) {
    const double q = -0.25 * ax * ax;
    double term = 1.0;
    for (int k = 1; k <= order; ++k) term *= 0.5 * ax / k;
    double sum = term;
    for (int k = 1; k < 200; ++k) {
      term *= q / (static_cast<double>(k) * (order + k));
      sum += term;
      if (std::abs(term) < 1e-16 * std::abs(sum)) break;
    }
    return sign * sum;
  }

  const double top = std::max(static_cast<double>(order), ax);
  int start = static_cast<int>(top + 30.0 + std::sqrt(40.0 * top));
  start += start % 2;
  const double two_over_x = 2.0 / ax;
  double j_next = 0.0;   // J_{k+1}
  double j_curr = 1e-30; // J_k, arbitrary seed
  double even_sum = 0.0; // sum of J_2k, k >= 1
  double wanted = (order == start) ? j_curr : 0.0;
  for (int k = start; k >= 1; --k) {
    const double j_prev = k * two_over_x * j_curr - j_next;
    j_next = j_curr;
    j_curr = j_prev;
    const int idx = k - 1;
    if (idx == order) wanted = j_curr;
    if (idx > 0 && idx % 2 == 0) even_sum += j_curr;
    if (std::abs(j_curr) > 1e250) {
      j_curr *= 1e-250;
      j_next *= 1e-250;
      even_sum *= 1e-250;
      wanted *= 1e-250;
    }
  }
  const double norm = j_curr + 2.0 * even_sum;
  return sign * wanted / norm;
}

/// Argument of the first maximum of J_order, the end of its rising branch.
inline double bessel_first_maximum(int order) {
  switch (order) {
    case 0: return 0.0;
    case 1: return 1.8411837813406593;
    case 2: return 3.0542369282271403;
    case 3: return 4.2011889412105285;
    default: break;
  }
  // McMahon-type estimate refined by bisection on the derivative sign.
  const double h = 1e-6;
  double lo = order, hi = order + 3.0 * std::cbrt(static_cast<double>(order)) + 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double d = bessel_j(order, mid + h) - bessel_j(order, mid - h);
    (d > 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// Flux-modulated qubit frequency

struct FluxProfile {
  double e_j_sum = 0.0;    ///< total Josephson energy (rad/ns)
  double e_c = 0.0;        ///< charging energy (rad/ns)
  double phi_bar = 0.0;    ///< parking flux (flux quanta)
  double phi_tilde = 0.0;  ///< modulation amplitude (flux quanta)
  double nu_prime = 0.0;   ///< flux modulation frequency (rad/ns)

  void validate() const {
    nhep::detail::require(e_j_sum > 0.0 && e_c > 0.0, "FluxProfile: E_J and E_c must be positive");
    nhep::detail::require(nu_prime > 0.0, "FluxProfile: modulation frequency must be positive");
    nhep::detail::require(std::abs(phi_bar) + std::abs(phi_tilde) < 0.5,
                          "FluxProfile: flux excursion reaches the Josephson-energy zero at 1/2 flux quantum");
  }

  double flux(double t) const { return phi_bar + phi_tilde * std::cos(nu_prime * t); }
  double josephson_energy(double t) const { return e_j_sum * std::abs(std::cos(kPi * flux(t))); }
  /// sqrt(8 E_c E_J(t)) - E_c
  double qubit_frequency(double t) const { return std::sqrt(8.0 * e_c * josephson_energy(t)) - e_c; }
};

struct FrequencyProfile {
  std::vector<double> times;          ///< one flux period, uniform (ns)
  std::vector<double> omega_samples;  ///< omega_e(t) (rad/ns)
  double omega_0 = 0.0;               ///< period average
  /// Signed cosine amplitudes eps_k of omega_e(t) = omega_0 + sum_k eps_k cos(k nu' t);
  /// index 0 holds k = 1.
  std::vector<double> harmonics;
  std::vector<double> harmonic_frequencies;  ///< k nu' (rad/ns)

  /// Index into harmonics of the largest |eps_k|.
  std::size_t dominant_harmonic() const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < harmonics.size(); ++i)
      if (std::abs(harmonics[i]) > std::abs(harmonics[best])) best = i;
    return best;
  }
};

inline FrequencyProfile qubit_frequency_profile(const FluxProfile& flux, std::size_t samples) {
  flux.validate();
  nhep::detail::require(samples >= 64 && (samples & (samples - 1)) == 0,
                        "qubit_frequency_profile: samples must be a power of two >= 64");
  FrequencyProfile out;
  const double period = 2.0 * kPi / flux.nu_prime;
  out.times.resize(samples);
  out.omega_samples.resize(samples);
  for (std::size_t k = 0; k < samples; ++k) {
    const double t = period * static_cast<double>(k) / static_cast<double>(samples);
    if (!(flux.josephson_energy(t) > 0.0))
      throw InvalidArgument("qubit_frequency_profile: Josephson energy vanishes within the sweep");
    out.times[k] = t;
    out.omega_samples[k] = flux.qubit_frequency(t);
  }
  Eigen::FFT<double> fft;
  std::vector<cplx> spectrum;
  fft.fwd(spectrum, out.omega_samples);
  const double n = static_cast<double>(samples);
  out.omega_0 = spectrum[0].real() / n;
  for (std::size_t k = 1; k < samples / 2; ++k) {
    out.harmonics.push_back(2.0 * spectrum[k].real() / n);
    out.harmonic_frequencies.push_back(static_cast<double>(k) * flux.nu_prime);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sideband couplings

struct ModulationParams {
  double g_r = 0.0;      ///< bare qubit-resonator coupling (rad/ns)
  double delta_r = 0.0;  ///< omega_r - omega_0 (rad/ns)
  double epsilon = 0.0;  ///< frequency-modulation amplitude (rad/ns)
  double nu = 1.0;       ///< modulation frequency (rad/ns)
  int sideband_order = 1;
  int fock_cutoff = 3;   ///< highest retained photon number

  double mu() const { return epsilon / nu; }

  void validate() const {
    nhep::detail::require(std::isfinite(nu) && nu > 0.0, "ModulationParams: nu must be positive");
    nhep::detail::require(std::isfinite(g_r) && g_r >= 0.0, "ModulationParams: g_r must be finite and >= 0");
    nhep::detail::require(std::isfinite(delta_r) && std::isfinite(epsilon), "ModulationParams: non-finite drive");
    nhep::detail::require(sideband_order == 1 || sideband_order == 2, "ModulationParams: sideband order must be 1 or 2");
    nhep::detail::require(fock_cutoff >= 1, "ModulationParams: Fock cutoff must be >= 1");
  }

  /// Drive tuned exactly to the requested sideband: delta_r = order * nu.
  static ModulationParams resonant(double g_r, double nu, double mu, int order = 1, int cutoff = 3) {
    ModulationParams m{g_r, order * nu, mu * nu, nu, order, cutoff};
    m.validate();
    return m;
  }
};

inline bool is_sideband_resonant(const ModulationParams& m, double rel_tol = 1e-9) {
  const double target = m.delta_r / m.sideband_order;
  return std::abs(m.nu - target) <= rel_tol * std::max(std::abs(m.nu), std::abs(target));
}

/// Omega = J_k(mu) g_r for a drive on the order-k sideband.
inline double effective_coupling(const ModulationParams& m) {
  m.validate();
  nhep::detail::require(is_sideband_resonant(m),
                        "effective_coupling: drive is off the sideband resonance (nu != delta_r / order)");
  return bessel_j(m.sideband_order, m.mu()) * m.g_r;
}

/// Modulation index on the rising branch of J_order giving J_order(mu) g_r = omega.
inline double modulation_index_for(double omega, double g_r, int order) {
  nhep::detail::require(order == 1 || order == 2, "modulation_index_for: order must be 1 or 2");
  nhep::detail::require(g_r > 0.0 && omega >= 0.0, "modulation_index_for: need g_r > 0 and omega >= 0");
  const double target = omega / g_r;
  double hi = bessel_first_maximum(order);
  nhep::detail::require(target <= bessel_j(order, hi),
                        "modulation_index_for: requested coupling exceeds max_mu J_k(mu) g_r");
  double lo = 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (bessel_j(order, mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace nhep::sideband
