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


#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "nhep/entanglement.hpp"
#include "nhep/measurement.hpp"
#include "nhep/spectro.hpp"
#include "oracles.hpp"

namespace {

namespace sp = nhep::spectro;
using nhep::cplx;
using nhep::DensityMatrix;
using nhep::kPi;
using nhep::model::NhParams;

sp::FitParams analytic(const NhParams& p) { return sp::FitParams::from_eigen_system(nhep::model::eigen_system(p)); }

double window(const NhParams& p) { return 3.0 * nhep::dynamics::characteristic_time(p); }

TEST(TrajectoryModel, InitialStateAndModelAgreement) {
  for (double eta : {0.5, 2.0, 5.0}) {
    const NhParams p = NhParams::from_eta(eta, 0.0, 0.005);
    const auto f = analytic(p);
    const auto s0 = sp::trajectory_model(f, 0.0);
    EXPECT_NEAR(std::abs(s0[0]), 1.0, 1e-12);
    for (double t = 0.0; t < 3000.0; t += 97.0)
      EXPECT_GT(nhep::entanglement::state_fidelity(sp::trajectory_model(f, t), nhep::model::no_jump_state(p, t)),
                1.0 - 1e-12);
  }
}

TEST(TrajectoryModel, OverdampedApproachesSlowEigenstate) {
  const NhParams p = NhParams::from_eta(0.5, 0.0, 0.005);
  const auto f = analytic(p);
  // The "+" state decays more slowly below the exceptional point.
  ASSERT_GT(f.c_plus_2, f.c_minus_2);
  const auto late = sp::trajectory_model(f, 2e5);
  EXPECT_GT(nhep::entanglement::state_fidelity(late, f.phi_plus()), 1.0 - 1e-9);
}

TEST(TrajectoryModel, RejectsDegenerateExpansion) {
  sp::FitParams f;
  f.alpha_minus = f.alpha_plus;
  f.beta_minus = f.beta_plus;
  EXPECT_THROW(sp::trajectory_model(f, 1.0), nhep::InvalidArgument);
}

TEST(Residual, Examples) {
  const NhParams p = NhParams::from_eta(5.0, 0.0, 0.005);
  const auto f = analytic(p);
  const auto series = sp::synthetic_series(f, window(p), 60);
  EXPECT_NEAR(sp::residual(f, series), 0.0, 1e-12);
  std::vector<sp::DensitySample> mixed;
  for (const auto& s : series) mixed.push_back({s.t, DensityMatrix(Eigen::Matrix2cd::Identity() / 2.0, nhep::basis::single_excitation())});
  EXPECT_NEAR(sp::residual(f, mixed), 30.0, 1e-12);
  const auto off = analytic(NhParams{p.omega * 1.01, p.kappa_q, p.kappa_f, 1});
  EXPECT_GT(sp::residual(off, series), 1e-6);
  EXPECT_THROW(sp::residual(f, {}), nhep::InvalidArgument);
}

TEST(Residual, GlobalPhaseInvariance) {
  oracle::Gen g(61);
  const auto f = analytic(NhParams::from_eta(2.0, 0.0, 0.005));
  const auto series = sp::synthetic_series(analytic(NhParams::from_eta(2.1, 0.0, 0.005)), 2000.0, 40);
  const double base = sp::residual(f, series);
  for (int i = 0; i < 20; ++i) {
    sp::FitParams q = f;
    const cplx a = std::polar(1.0, g.uniform(0, 2 * kPi)), b = std::polar(1.0, g.uniform(0, 2 * kPi));
    q.alpha_plus *= a;
    q.beta_plus *= a;
    q.alpha_minus *= b;
    q.beta_minus *= b;
    EXPECT_NEAR(sp::residual(q, series), base, 1e-12);
  }
}

sp::FitOptions options_for(const NhParams& p) {
  sp::FitOptions o;
  o.mean_energy = cplx(0.0, -0.25 * p.gamma());
  o.reference = nhep::model::eigen_system(p);
  o.eta_hint = p.eta();
  o.threads = 4;
  return o;
}

TEST(Fit, NoiselessRoundTrip) {
  for (double eta : {0.5, 2.0, 5.0}) {
    const NhParams p = NhParams::from_eta(eta, 0.0, 0.005);
    const auto es = nhep::model::eigen_system(p);
    const auto series = sp::synthetic_series(analytic(p), window(p), 60);
    const auto r = sp::fit_spectrum(series, std::nullopt, options_for(p));
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(std::abs(r.params.e_plus() - es.e_plus), 0.0, 1e-6) << eta;
    EXPECT_NEAR(std::abs(r.params.e_minus() - es.e_minus), 0.0, 1e-6) << eta;
    EXPECT_GE(r.fidelities->first, 1.0 - 1e-9);
    EXPECT_GE(r.fidelities->second, 1.0 - 1e-9);
    EXPECT_FALSE(r.ill_conditioned);
  }
}

TEST(Fit, RandomAboveExceptionalPointParameters) {
  oracle::Gen g(67);
  for (int i = 0; i < 100; ++i) {
    const double kq = g.uniform() < 0.5 ? 0.0 : g.uniform(0.0, 0.002);
    const NhParams p = NhParams::from_eta(g.uniform(1.3, 8.0), kq, 0.005 + kq);
    const auto es = nhep::model::eigen_system(p);
    const auto series = sp::synthetic_series(analytic(p), window(p), 60);
    auto o = options_for(p);
    o.mean_energy = p.mean_energy();
    const auto r = sp::fit_spectrum(series, std::nullopt, o);
    EXPECT_NEAR(std::abs(r.params.gap() - es.gap), 0.0, 1e-6);
    EXPECT_GE(std::min(r.fidelities->first, r.fidelities->second), 1.0 - 1e-9);
  }
}

TEST(Fit, DeterministicAcrossThreadCounts) {
  const NhParams p = NhParams::from_eta(0.7, 0.0, 0.005);
  const auto series = sp::synthetic_series(analytic(p), window(p), 40);
  auto o = options_for(p);
  o.threads = 1;
  const auto a = sp::fit_spectrum(series, std::nullopt, o);
  o.threads = 8;
  const auto b = sp::fit_spectrum(series, std::nullopt, o);
  EXPECT_EQ(a.params.c_plus_1, b.params.c_plus_1);
  EXPECT_EQ(a.params.c_minus_2, b.params.c_minus_2);
  EXPECT_EQ(a.best_start, b.best_start);
  EXPECT_EQ(a.trace, b.trace);
}

TEST(Fit, ConvergenceTraceRescaling) {
  const NhParams p = NhParams::from_eta(3.0, 0.0, 0.005);
  const auto r = sp::fit_spectrum(sp::synthetic_series(analytic(p), window(p), 40), std::nullopt, options_for(p));
  const auto scaled = r.rescaled_trace();
  ASSERT_FALSE(scaled.empty());
  for (double v : scaled.back()) EXPECT_EQ(v, 0.0);
  for (const auto& row : scaled)
    for (double v : row) EXPECT_LE(std::abs(v), 1.0 + 1e-12);
  EXPECT_EQ(sp::FitResult::trace_columns().size(), scaled.front().size());
}

TEST(Fit, FlagsNearExceptionalPoint) {
  const NhParams p = NhParams::from_eta(1.02, 0.0, 0.005);
  const auto r = sp::fit_spectrum(sp::synthetic_series(analytic(NhParams::from_eta(1.2, 0.0, 0.005)), 5000.0, 40),
                                  std::nullopt, options_for(p));
  EXPECT_TRUE(r.ill_conditioned);
}

TEST(Fit, UserInitialGuessAndIterationCap) {
  const NhParams p = NhParams::from_eta(4.0, 0.0, 0.005);
  const auto series = sp::synthetic_series(analytic(p), window(p), 40);
  auto o = options_for(p);
  o.starts = 1;
  o.optimizer.max_iterations = 5;
  const auto capped = sp::fit_spectrum(series, analytic(NhParams::from_eta(3.5, 0.0, 0.005)), o);
  EXPECT_FALSE(capped.converged);
  EXPECT_LE(capped.iterations, 5);
}

TEST(Fit, TomographyNoiseAtEtaFive) {
  const NhParams p = NhParams::from_eta(5.0, 0.0, 0.005);
  const double span = window(p);
  nhep::measurement::PipelineOptions po;
  po.mapping.kappa_f = 0.005;
  po.ancilla = nhep::measurement::reference_ancilla_fidelity();
  po.qubit = nhep::measurement::reference_qubit_fidelity();
  po.shots = 3000;
  std::vector<double> fp, fm;
  for (int s = 0; s < 5; ++s) {
    nhep::Rng rng(nhep::derive_seed(11, s));
    std::vector<sp::DensitySample> series;
    for (int i = 0; i < 60; ++i) {
      const double t = span * i / 59.0;
      const auto r = nhep::measurement::run_pipeline(nhep::model::propagated_state(p, t), po, rng);
      series.push_back({t, r.corrected});
    }
    const auto fit = sp::fit_spectrum(series, std::nullopt, options_for(p));
    fp.push_back(fit.fidelities->first);
    fm.push_back(fit.fidelities->second);
  }
  std::sort(fp.begin(), fp.end());
  std::sort(fm.begin(), fm.end());
  EXPECT_GE(fp[2], 0.98);
  EXPECT_GE(fm[2], 0.98);
}

TEST(EpSweep, AnalyticLinearLawAndGapSupport) {
  std::vector<double> eta;
  for (int i = 1; i <= 300; ++i) eta.push_back(0.01 * i);
  const auto rows = sp::ep_sweep_analytic(eta, 0.0, 0.005);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    EXPECT_NEAR(r.conc_plus, std::min(r.eta, 1.0), 1e-12);
    if (r.eta < 1.0 - 1e-9) {
      EXPECT_EQ(r.re_gap, 0.0);
    }
    if (r.eta > 1.0 + 1e-9) {
      EXPECT_EQ(r.im_gap, 0.0);
    }
    if (i + 1 < rows.size()) {
      if (rows[i + 1].eta < 1.0 - 1e-9) {
        EXPECT_NEAR(r.dconc_plus, 1.0, 1e-9);
      }
      if (r.eta > 1.0 + 1e-9) {
        EXPECT_NEAR(r.dconc_plus, 0.0, 1e-9);
      }
    } else {
      EXPECT_TRUE(std::isnan(r.dconc_plus));
    }
  }
}

TEST(EpSweep, PhaseDifference) {
  std::vector<double> eta;
  for (int i = 0; i <= 40; ++i) eta.push_back(0.5 + 0.025 * i);
  eta.push_back(50.0);
  eta.push_back(1000.0);
  const auto rows = sp::ep_sweep_analytic(eta, 0.0, 0.005);
  // Above the exceptional point the branches separate as pi - 2 asin(1/eta).
  for (const auto& r : rows) {
    if (r.eta < 1.0) {
      EXPECT_NEAR(r.phase_diff, 0.0, 1e-12);
    } else if (r.eta > 1.0) {
      EXPECT_NEAR(std::abs(r.phase_diff), kPi - 2.0 * std::asin(1.0 / r.eta), 1e-9);
    }
  }
  EXPECT_NEAR(std::abs(rows.back().phase_diff), kPi, 2.1e-3);
}

TEST(EpSweep, FromFitsMatchesAnalytic) {
  EXPECT_THROW(sp::validate_eta_grid({0.5, 2.0, 5.0}), nhep::InvalidArgument);
  std::vector<double> eta;
  for (int i = 0; i <= 20; ++i) eta.push_back(0.5 + 0.05 * i);
  eta.push_back(2.0);
  eta.push_back(5.0);
  std::vector<sp::FitParams> fits;
  for (double e : eta) fits.push_back(analytic(NhParams::from_eta(e, 0.0, 0.005)));
  const auto a = sp::ep_sweep_analytic(eta, 0.0, 0.005);
  const auto b = sp::ep_sweep_from_fits(eta, fits);
  for (std::size_t i = 0; i < eta.size(); ++i) {
    EXPECT_NEAR(a[i].conc_plus, b[i].conc_plus, 1e-12);
    EXPECT_NEAR(a[i].re_gap, b[i].re_gap, 1e-15);
    EXPECT_NEAR(a[i].phase_diff, b[i].phase_diff, 1e-12);
  }
}

TEST(EpSweep, GridValidation) {
  EXPECT_THROW(sp::validate_eta_grid({0.5, 0.9, 1.0}), nhep::InvalidArgument);
  EXPECT_THROW(sp::validate_eta_grid({0.5, 0.4}), nhep::InvalidArgument);
  EXPECT_NO_THROW(sp::validate_eta_grid({0.1, 0.5, 0.8, 0.85, 0.9, 0.95, 1.0, 1.05, 1.1, 1.15, 1.2, 2.0}));
  EXPECT_THROW(sp::ep_sweep_analytic({0.5, 0.6}, 0.3, 0.3), nhep::InvalidArgument);
}

TEST(EpSweep, BranchLabelsContinuousAwayFromExceptionalPoint) {
  std::vector<double> eta;
  for (int i = 0; i <= 200; ++i) eta.push_back(1.05 + 0.02 * i);
  nhep::cplx prev = nhep::model::eigen_system(NhParams::from_eta(eta[0], 0.0, 0.005)).e_plus;
  for (double e : eta) {
    const auto cur = nhep::model::eigen_system(NhParams::from_eta(e, 0.0, 0.005)).e_plus;
    EXPECT_LT(std::abs(cur - prev), 1e-3);
    prev = cur;
  }
}

}  // namespace
