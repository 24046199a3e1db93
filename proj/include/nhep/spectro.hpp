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
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "nhep/dynamics.hpp"
#include "nhep/errors.hpp"
#include "nhep/model.hpp"
#include "nhep/nelder_mead.hpp"
#include "nhep/parallel.hpp"
#include "nhep/random.hpp"
#include "nhep/state.hpp"

/// Extraction of complex eigenenergies and eigenstates from a time series of
/// single-excitation density matrices, and observables of the entanglement
/// transition across the exceptional point.
///
/// States are written on {|e,0>, |g,1>}; an eigenstate is
/// alpha |g,1> + beta |e,0>, stored as the vector (beta, alpha).
namespace nhep::spectro {

struct FitParams {
  double c_plus_1 = 0.0;   ///< Re E_+
  double c_plus_2 = 0.0;   ///< Im E_+
  double c_minus_1 = 0.0;  ///< Re E_-
  double c_minus_2 = 0.0;  ///< Im E_-
  cplx alpha_plus{1.0, 0.0};
  cplx beta_plus{0.0, 0.0};
  cplx alpha_minus{0.0, 0.0};
  cplx beta_minus{1.0, 0.0};

  cplx e_plus() const { return {c_plus_1, c_plus_2}; }
  cplx e_minus() const { return {c_minus_1, c_minus_2}; }
  cplx gap() const { return e_plus() - e_minus(); }

  /// alpha_- beta_+ - alpha_+ beta_-
  cplx denominator() const { return alpha_minus * beta_plus - alpha_plus * beta_minus; }

  PureState phi_plus() const { return PureState(Eigen::Vector2cd(beta_plus, alpha_plus), basis::single_excitation(1)); }
  PureState phi_minus() const {
    return PureState(Eigen::Vector2cd(beta_minus, alpha_minus), basis::single_excitation(1));
  }

  static FitParams from_eigen_system(const model::EigenSystem& es) {
    FitParams p;
    p.c_plus_1 = es.e_plus.real();
    p.c_plus_2 = es.e_plus.imag();
    p.c_minus_1 = es.e_minus.real();
    p.c_minus_2 = es.e_minus.imag();
    p.beta_plus = es.phi_plus[0];
    p.alpha_plus = es.phi_plus[1];
    p.beta_minus = es.phi_minus[0];
    p.alpha_minus = es.phi_minus[1];
    return p;
  }
};

namespace detail {

inline constexpr double kDegenerateDenominator = 1e-12;

/// Unnormalized model amplitudes; empty when the expansion is degenerate.
inline std::optional<Eigen::Vector2cd> model_amplitudes(const FitParams& p, double t) {
  const cplx den = p.denominator();
  if (!(std::abs(den) > kDegenerateDenominator)) return std::nullopt;
  const cplx wp = p.alpha_minus * std::exp(-kI * p.e_plus() * t);
  const cplx wm = p.alpha_plus * std::exp(-kI * p.e_minus() * t);
  Eigen::Vector2cd v(wp * p.beta_plus - wm * p.beta_minus, wp * p.alpha_plus - wm * p.alpha_minus);
  v /= den;
  return v;
}

}  // namespace detail

/// Normalized (alpha_- e^{-i E_+ t} Phi_+ - alpha_+ e^{-i E_- t} Phi_-) / (alpha_- beta_+ - alpha_+ beta_-),
/// the evolution of |e,0> expanded in the two eigenstates.
inline PureState trajectory_model(const FitParams& p, double t) {
  const auto v = detail::model_amplitudes(p, t);
  nhep::detail::require(v.has_value(), "trajectory_model: eigenstates are degenerate (alpha_- beta_+ = alpha_+ beta_-)");
  return PureState(*v, basis::single_excitation(1)).normalized();
}

struct DensitySample {
  double t = 0.0;
  DensityMatrix rho;  ///< 2x2 on {|e,0>, |g,1>}
};

namespace detail {

inline void require_series(const std::vector<DensitySample>& series) {
  nhep::detail::require(!series.empty(), "spectro: empty density-matrix series");
  for (const auto& s : series) {
    nhep::detail::require(s.rho.dim() == 2, "spectro: series must hold 2x2 density matrices");
    nhep::detail::require(std::abs(s.rho.trace() - 1.0) <= 1e-9, "spectro: series matrices must have unit trace");
  }
}

/// Sum over samples of 1 - <psi|rho|psi>; +inf for a degenerate model.
inline double residual_unchecked(const FitParams& p, const std::vector<DensitySample>& series) {
  double sum = 0.0;
  for (const auto& s : series) {
    const auto v = model_amplitudes(p, s.t);
    if (!v) return std::numeric_limits<double>::infinity();
    const double n2 = v->squaredNorm();
    if (!(n2 > 0.0) || !std::isfinite(n2)) return std::numeric_limits<double>::infinity();
    const Eigen::Vector2cd& a = *v;
    const Eigen::Matrix2cd r = s.rho.entries;
    sum += 1.0 - std::real(a.dot(r * a)) / n2;
  }
  return sum;
}

}  // namespace detail

/// Sum_t (1 - Tr[rho(t) |psi(t)><psi(t)|]): zero for a perfect fit, each term in [0, 1].
inline double residual(const FitParams& p, const std::vector<DensitySample>& series) {
  detail::require_series(series);
  nhep::detail::require(std::abs(p.denominator()) > detail::kDegenerateDenominator,
                        "residual: eigenstates are degenerate (alpha_- beta_+ = alpha_+ beta_-)");
  return detail::residual_unchecked(p, series);
}

/// Samples rho(t) = |psi(t)><psi(t)| of the model on a uniform grid.
inline std::vector<DensitySample> synthetic_series(const FitParams& p, double t_max, std::size_t samples) {
  nhep::detail::require(samples >= 2, "synthetic_series: need at least two samples");
  std::vector<DensitySample> out;
  for (std::size_t i = 0; i < samples; ++i) {
    const double t = t_max * static_cast<double>(i) / static_cast<double>(samples - 1);
    out.push_back({t, DensityMatrix::from_pure(trajectory_model(p, t))});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Fitting

struct FitOptions {
  /// Common energy (E_+ + E_-)/2. A normalized series does not determine it,
  /// so it is supplied from the known decay rates, -i (kappa_q + kappa_f)/4.
  cplx mean_energy{0.0, 0.0};
  int starts = 8;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::optional<double> eta_hint;  ///< flags fits near the exceptional point
  std::optional<model::EigenSystem> reference;  ///< for eigenstate fidelities
  optimize::NelderMeadOptions optimizer;
};

struct FitResult {
  FitParams params;
  double residual = 0.0;
  bool converged = false;
  bool ill_conditioned = false;
  int iterations = 0;
  std::size_t best_start = 0;
  std::optional<std::pair<double, double>> fidelities;  ///< (F_+, F_-) against the reference

  /// Per-iteration history of the winning start; columns in trace_columns().
  std::vector<std::vector<double>> trace;
  static std::vector<std::string> trace_columns() {
    return {"residual", "re_gap", "im_gap", "theta_plus", "phi_plus", "theta_minus", "phi_minus"};
  }

  /// Each trace column mapped to (f_i - f_N) / (max f - min f); constant columns give 0.
  std::vector<std::vector<double>> rescaled_trace() const {
    std::vector<std::vector<double>> out = trace;
    if (trace.empty()) return out;
    const std::size_t cols = trace.front().size();
    for (std::size_t c = 0; c < cols; ++c) {
      double lo = trace[0][c], hi = trace[0][c];
      for (const auto& row : trace) {
        lo = std::min(lo, row[c]);
        hi = std::max(hi, row[c]);
      }
      const double last = trace.back()[c];
      for (auto& row : out) row[c] = hi > lo ? (row[c] - last) / (hi - lo) : 0.0;
    }
    return out;
  }
};

namespace detail {

// Parameter vector: (T Re dE, T Im dE, theta_+, phi_+, theta_-, phi_-), T the
// series span; alpha = cos theta, beta = sin theta e^{i phi}.
inline FitParams unpack(const Eigen::VectorXd& x, cplx mean, double span) {
  const cplx gap(x(0) / span, x(1) / span);
  FitParams p;
  const cplx ep = mean + 0.5 * gap;
  const cplx em = mean - 0.5 * gap;
  p.c_plus_1 = ep.real();
  p.c_plus_2 = ep.imag();
  p.c_minus_1 = em.real();
  p.c_minus_2 = em.imag();
  p.alpha_plus = std::cos(x(2));
  p.beta_plus = std::sin(x(2)) * std::exp(kI * x(3));
  p.alpha_minus = std::cos(x(4));
  p.beta_minus = std::sin(x(4)) * std::exp(kI * x(5));
  return p;
}

inline std::pair<double, double> angles_of(const PureState& phi) {
  const cplx beta = phi[0];
  const cplx alpha = phi[1];
  const double theta = std::atan2(std::abs(beta), std::abs(alpha));
  const double ph = std::abs(beta) > 0.0 && std::abs(alpha) > 0.0 ? std::arg(beta) - std::arg(alpha)
                    : std::abs(beta) > 0.0                        ? std::arg(beta)
                                                                   : 0.0;
  return {theta, ph};
}

inline Eigen::VectorXd pack(const FitParams& p, double span) {
  Eigen::VectorXd x(6);
  const cplx gap = p.gap();
  x(0) = gap.real() * span;
  x(1) = gap.imag() * span;
  const PureState pp = p.phi_plus().normalized();
  const PureState pm = p.phi_minus().normalized();
  std::tie(x(2), x(3)) = angles_of(pp);
  std::tie(x(4), x(5)) = angles_of(pm);
  return x;
}

inline cplx rephase(cplx v, cplx ref) { return std::abs(ref) > 0.0 ? v * std::conj(ref) / std::abs(ref) : v; }

/// Gauge alpha >= 0 real, normalized; label "+" on the larger real part of
/// E (ties within 1e-6 |dE| broken by the larger imaginary part).
inline FitParams canonicalize(FitParams p) {
  auto fix = [](cplx& alpha, cplx& beta) {
    const double n = std::sqrt(std::norm(alpha) + std::norm(beta));
    alpha /= n;
    beta /= n;
    if (std::abs(alpha) > 0.0) {
      beta = rephase(beta, alpha);
      alpha = std::abs(alpha);
    } else {
      beta = std::abs(beta);
    }
  };
  fix(p.alpha_plus, p.beta_plus);
  fix(p.alpha_minus, p.beta_minus);
  const cplx gap = p.gap();
  const double tol = 1e-6 * std::abs(gap);
  const bool swap = gap.real() < -tol || (std::abs(gap.real()) <= tol && gap.imag() < 0.0);
  if (swap) {
    std::swap(p.c_plus_1, p.c_minus_1);
    std::swap(p.c_plus_2, p.c_minus_2);
    std::swap(p.alpha_plus, p.alpha_minus);
    std::swap(p.beta_plus, p.beta_minus);
  }
  return p;
}

/// Angular frequency of the |e,0> population and a decay rate of its
/// approach to the final value.
inline std::pair<double, double> population_features(const std::vector<DensitySample>& series) {
  std::vector<double> pe;
  for (const auto& s : series) pe.push_back(std::real(s.rho(0, 0)));
  const double span = series.back().t - series.front().t;
  const double dt = span / static_cast<double>(series.size() - 1);
  double freq = 0.0;
  double lo = *std::min_element(pe.begin(), pe.end()), hi = *std::max_element(pe.begin(), pe.end());
  if (series.size() >= 4 && hi - lo > 1e-9) freq = dynamics::dominant_frequency(pe, dt);

  // Log-linear fit of |P(t) - P(end)| over the first 90% of the series.
  const double tail = pe.back();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  double peak = 0.0;
  for (double v : pe) peak = std::max(peak, std::abs(v - tail));
  const std::size_t stop = std::max<std::size_t>(2, static_cast<std::size_t>(0.9 * static_cast<double>(pe.size())));
  for (std::size_t i = 0; i < stop && i < pe.size(); ++i) {
    const double d = std::abs(pe[i] - tail);
    if (d <= 1e-6 * peak || d <= 0.0) continue;
    const double x = series[i].t, y = std::log(d);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  double rate = 0.0;
  if (n >= 2) {
    const double den = n * sxx - sx * sx;
    if (den > 0.0) rate = std::max(0.0, -(n * sxy - sx * sy) / den);
  }
  if (!(rate > 0.0)) rate = 1.0 / std::max(span, 1e-12);
  return {freq, rate};
}

inline FitParams physical_guess(cplx gap, cplx mean) {
  // Two-level model with the given gap and decay contrast 4|Im E_c|.
  const double kappa = 4.0 * std::abs(mean.imag());
  double x2 = std::real(0.25 * gap * gap) + kappa * kappa / 16.0;
  const double x = x2 > 0.0 ? std::sqrt(x2) : 1e-3 * std::max(kappa, std::abs(gap));
  model::EigenSystem es;
  es.e_plus = mean + 0.5 * gap;
  es.e_minus = mean - 0.5 * gap;
  es.gap = gap;
  es.phi_plus = PureState(model::detail::subspace_eigenvector(x, kappa, 0.5 * gap, true), basis::single_excitation(1));
  es.phi_minus = PureState(model::detail::subspace_eigenvector(x, kappa, -0.5 * gap, false), basis::single_excitation(1));
  return FitParams::from_eigen_system(es);
}

}  // namespace detail

/// Initial guess from the series alone: a real gap at the population
/// oscillation frequency when one is visible, otherwise an imaginary gap at
/// the relaxation rate.
inline FitParams auto_initial_guess(const std::vector<DensitySample>& series, cplx mean_energy) {
  detail::require_series(series);
  nhep::detail::require(series.size() >= 4, "auto_initial_guess: need at least four samples");
  const auto [freq, rate] = detail::population_features(series);
  const double span = series.back().t - series.front().t;
  const bool oscillating = freq * span > 2.0 * kPi;
  return detail::physical_guess(oscillating ? cplx(freq, 0.0) : cplx(0.0, rate), mean_energy);
}

inline double eigenstate_fidelity(const PureState& a, const PureState& b) {
  return std::norm(a.normalized().amplitudes.dot(b.normalized().amplitudes));
}

/// Multi-start Nelder-Mead minimization of residual(). Start 0 uses `init`
/// (or the automatic guess), start 1 the alternative gap branch, further
/// starts are seeded perturbations. The reported result is the start with
/// the smallest residual (lowest index on ties).
inline FitResult fit_spectrum(const std::vector<DensitySample>& series, const std::optional<FitParams>& init,
                              const FitOptions& opt = {}) {
  detail::require_series(series);
  nhep::detail::require(series.size() >= 4, "fit_spectrum: need at least four samples");
  nhep::detail::require(opt.starts >= 1, "fit_spectrum: need at least one start");
  for (std::size_t i = 1; i < series.size(); ++i)
    nhep::detail::require(series[i].t > series[i - 1].t, "fit_spectrum: sample times must increase");
  const double span = series.back().t - series.front().t;

  std::vector<Eigen::VectorXd> starts;
  FitParams first = init ? *init : auto_initial_guess(series, opt.mean_energy);
  starts.push_back(detail::pack(first, span));
  {
    const auto [freq, rate] = detail::population_features(series);
    const cplx g0 = first.gap();
    const cplx alt = std::abs(g0.real()) >= std::abs(g0.imag()) ? cplx(0.0, rate) : cplx(std::max(freq, 2.0 * kPi / span), 0.0);
    starts.push_back(detail::pack(detail::physical_guess(alt, opt.mean_energy), span));
  }
  Rng rng(opt.seed);
  while (static_cast<int>(starts.size()) < opt.starts) {
    Eigen::VectorXd x = starts[starts.size() % 2];
    for (Eigen::Index k = 0; k < 2; ++k) x(k) *= 1.0 + 0.5 * (2.0 * rng.uniform() - 1.0);
    for (Eigen::Index k = 2; k < 6; ++k) x(k) += 0.3 * (2.0 * rng.uniform() - 1.0);
    starts.push_back(x);
  }
  starts.resize(static_cast<std::size_t>(opt.starts));

  const cplx mean = opt.mean_energy;
  auto objective = [&](const Eigen::VectorXd& x) {
    return detail::residual_unchecked(detail::unpack(x, mean, span), series);
  };
  std::vector<optimize::NelderMeadResult> runs(starts.size());
  parallel_for(starts.size(), opt.threads, [&](std::size_t i) {
    Eigen::VectorXd steps(6);
    const double gscale = std::max({std::abs(starts[i](0)), std::abs(starts[i](1)), 1.0});
    steps << 0.1 * gscale, 0.1 * gscale, 0.1, 0.2, 0.1, 0.2;
    runs[i] = optimize::nelder_mead(objective, starts[i], steps, opt.optimizer);
  });

  std::size_t best = 0;
  for (std::size_t i = 1; i < runs.size(); ++i)
    if (runs[i].value < runs[best].value) best = i;
  const auto& run = runs[best];
  if (!std::isfinite(run.value)) throw NumericalFailure("fit_spectrum: every start ended on a degenerate model");

  FitResult out;
  out.params = detail::canonicalize(detail::unpack(run.x, mean, span));
  out.residual = run.value;
  out.converged = run.converged;
  out.iterations = run.iterations;
  out.best_start = best;
  for (std::size_t i = 0; i < run.f_history.size(); ++i) {
    const Eigen::VectorXd& x = run.x_history[i];
    out.trace.push_back({run.f_history[i], x(0) / span, x(1) / span, x(2), x(3), x(4), x(5)});
  }
  const bool near_ep = opt.eta_hint && std::abs(*opt.eta_hint - 1.0) < 0.05;
  out.ill_conditioned = near_ep || std::abs(out.params.denominator()) < 1e-3;
  if (opt.reference) {
    out.fidelities = std::make_pair(eigenstate_fidelity(out.params.phi_plus(), opt.reference->phi_plus),
                                    eigenstate_fidelity(out.params.phi_minus(), opt.reference->phi_minus));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exceptional-point sweep observables

struct EpRow {
  double eta = 0.0;
  double re_gap = 0.0;  ///< Re (E_+ - E_-) (rad/ns)
  double im_gap = 0.0;
  double conc_plus = 0.0;
  double conc_minus = 0.0;
  double dconc_plus = std::numeric_limits<double>::quiet_NaN();  ///< forward difference; NaN on the last row
  double dconc_minus = std::numeric_limits<double>::quiet_NaN();
  double phase_diff = 0.0;  ///< phi_+ - phi_- in (-pi, pi]
};

/// Strictly increasing, and no wider than 0.05 inside [0.8, 1.2].
inline void validate_eta_grid(const std::vector<double>& eta) {
  nhep::detail::require(eta.size() >= 2, "eta grid: need at least two points");
  for (std::size_t i = 0; i < eta.size(); ++i) {
    nhep::detail::require(std::isfinite(eta[i]) && eta[i] >= 0.0, "eta grid: values must be finite and >= 0");
    if (i == 0) continue;
    nhep::detail::require(eta[i] > eta[i - 1], "eta grid: values must be strictly increasing");
    const bool touches = eta[i] > 0.8 && eta[i - 1] < 1.2;  // interval overlaps [0.8, 1.2]
    nhep::detail::require(!touches || eta[i] - eta[i - 1] <= 0.05 * (1.0 + 1e-9),
                          "eta grid: spacing near the exceptional point must not exceed 0.05");
  }
}

inline double wrap_phase(double phi) {
  double w = std::remainder(phi, 2.0 * kPi);
  if (w <= -kPi) w += 2.0 * kPi;
  return w;
}

namespace detail {

/// Phase of the |g,1> amplitude relative to the |e,0> amplitude.
inline double relative_phase(const PureState& phi) { return std::arg(phi[1] * std::conj(phi[0])); }

inline double pure_concurrence(const PureState& phi) {
  const double n = phi.norm_squared();
  return n > 0.0 ? std::min(1.0, 2.0 * std::abs(phi[0]) * std::abs(phi[1]) / n) : 0.0;
}

inline void fill_derivatives(std::vector<EpRow>& rows) {
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    const double h = rows[i + 1].eta - rows[i].eta;
    rows[i].dconc_plus = (rows[i + 1].conc_plus - rows[i].conc_plus) / h;
    rows[i].dconc_minus = (rows[i + 1].conc_minus - rows[i].conc_minus) / h;
  }
}

}  // namespace detail

/// Closed-form sweep at fixed decay rates.
inline std::vector<EpRow> ep_sweep_analytic(const std::vector<double>& eta, double kappa_q, double kappa_f) {
  validate_eta_grid(eta);
  std::vector<EpRow> rows;
  for (double e : eta) {
    const auto p = model::NhParams::from_eta(e, kappa_q, kappa_f);
    const auto es = model::eigen_system(p);
    const auto c = model::eigen_concurrence(p);
    EpRow r;
    r.eta = e;
    r.re_gap = es.gap.real();
    r.im_gap = es.gap.imag();
    r.conc_plus = c.plus;
    r.conc_minus = c.minus;
    r.phase_diff = wrap_phase(detail::relative_phase(es.phi_plus) - detail::relative_phase(es.phi_minus));
    rows.push_back(r);
  }
  detail::fill_derivatives(rows);
  return rows;
}

/// Same observables from fitted parameters, one per grid point.
inline std::vector<EpRow> ep_sweep_from_fits(const std::vector<double>& eta, const std::vector<FitParams>& fits) {
  validate_eta_grid(eta);
  nhep::detail::require(eta.size() == fits.size(), "ep_sweep_from_fits: one fit per grid point required");
  std::vector<EpRow> rows;
  for (std::size_t i = 0; i < eta.size(); ++i) {
    const FitParams& f = fits[i];
    EpRow r;
    r.eta = eta[i];
    r.re_gap = f.gap().real();
    r.im_gap = f.gap().imag();
    r.conc_plus = detail::pure_concurrence(f.phi_plus());
    r.conc_minus = detail::pure_concurrence(f.phi_minus());
    r.phase_diff = wrap_phase(detail::relative_phase(f.phi_plus()) - detail::relative_phase(f.phi_minus()));
    rows.push_back(r);
  }
  detail::fill_derivatives(rows);
  return rows;
}

}  // namespace nhep::spectro
