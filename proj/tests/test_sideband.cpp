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


#include <cmath>

#include <gtest/gtest.h>

#include "nhep/sideband.hpp"
#include "oracles.hpp"

namespace {

namespace sb = nhep::sideband;
using nhep::kPi;

TEST(Bessel, ReferenceValues) {
  EXPECT_EQ(sb::bessel_j(0, 0.0), 1.0);
  EXPECT_EQ(sb::bessel_j(3, 0.0), 0.0);
  EXPECT_NEAR(sb::bessel_j(1, 1.0), 0.4400505857449335, 1e-15);
  EXPECT_NEAR(sb::bessel_j(2, 1.0), 0.1149034849319005, 1e-15);
}

TEST(Bessel, MatchesQuadratureAndStandardLibrary) {
  oracle::Gen g(41);
  for (int i = 0; i < 400; ++i) {
    const int n = g.integer(0, 40);
    const double x = g.uniform(-30.0, 30.0);
    const double v = sb::bessel_j(n, x);
    EXPECT_NEAR(v, oracle::bessel_quadrature(n, x), 1e-12) << n << " " << x;
    const double ref = std::cyl_bessel_j(static_cast<double>(n), std::abs(x)) * ((x < 0 && n % 2) ? -1.0 : 1.0);
    EXPECT_NEAR(v, ref, 1e-12) << n << " " << x;
  }
}

TEST(Bessel, TinyHighOrderValuesKeepRelativeAccuracy) {
  // J_30(2) ~ 1e-24: the downward recurrence is stable for the minimal solution.
  const double v = sb::bessel_j(30, 2.0);
  const double ref = std::cyl_bessel_j(30.0, 2.0);
  EXPECT_NEAR(v / ref, 1.0, 1e-12);
}

TEST(Bessel, RejectsOutOfRange) {
  EXPECT_THROW(sb::bessel_j(1, 30.5), nhep::InvalidArgument);
  EXPECT_THROW(sb::bessel_j(-1, 1.0), nhep::InvalidArgument);
  EXPECT_NO_THROW(sb::bessel_j(1, -30.0));
}

TEST(Bessel, FirstMaxima) {
  for (int n = 1; n <= 5; ++n) {
    const double m = sb::bessel_first_maximum(n);
    const double h = 1e-4;
    EXPECT_GT(sb::bessel_j(n, m), sb::bessel_j(n, m - h));
    EXPECT_GT(sb::bessel_j(n, m), sb::bessel_j(n, m + h));
  }
}

TEST(EffectiveCoupling, Examples) {
  EXPECT_EQ(sb::effective_coupling(sb::ModulationParams::resonant(1.0, 1.0, 0.0, 1)), 0.0);
  EXPECT_NEAR(sb::effective_coupling(sb::ModulationParams::resonant(1.0, 1.0, 1.0, 1)), 0.4400505857449335, 1e-15);
  const double g_r = nhep::units::angular_from_mhz(41.0);
  const double om = sb::effective_coupling(sb::ModulationParams::resonant(g_r, 0.5, 1.0, 2));
  EXPECT_NEAR(om, 0.1149034849319005 * g_r, 1e-15);
  EXPECT_NEAR(om, 0.02960, 5e-6);
}

TEST(EffectiveCoupling, RejectsOffResonance) {
  sb::ModulationParams m = sb::ModulationParams::resonant(1.0, 1.0, 1.0, 1);
  m.delta_r *= 1.0 + 1e-6;
  EXPECT_THROW(sb::effective_coupling(m), nhep::InvalidArgument);
  m.delta_r = 1.0 + 1e-11;
  EXPECT_NO_THROW(sb::effective_coupling(m));
  m = sb::ModulationParams::resonant(1.0, 1.0, 1.0, 2);
  EXPECT_DOUBLE_EQ(m.delta_r, 2.0);
  m.nu = 0.0;
  EXPECT_THROW(sb::effective_coupling(m), nhep::InvalidArgument);
}

TEST(ModulationIndex, InvertsCouplingOnRisingBranch) {
  for (int order : {1, 2})
    for (double frac : {0.0, 0.05, 0.3, 0.9, 1.0}) {
      const double jmax = sb::bessel_j(order, sb::bessel_first_maximum(order));
      const double om = frac * jmax * 0.02;
      const double mu = sb::modulation_index_for(om, 0.02, order);
      EXPECT_LE(mu, sb::bessel_first_maximum(order) + 1e-12);
      EXPECT_NEAR(sb::bessel_j(order, mu) * 0.02, om, 1e-14);
    }
  EXPECT_THROW(sb::modulation_index_for(0.02, 0.02, 1), nhep::InvalidArgument);
}

TEST(FrequencyProfile, ConstantWithoutModulation) {
  const sb::FluxProfile f{2.0 * kPi * 20.0, 2.0 * kPi * 0.25, 0.1, 0.0, 0.3};
  const auto prof = sb::qubit_frequency_profile(f, 64);
  for (double e : prof.harmonics) EXPECT_NEAR(e, 0.0, 1e-12);
  EXPECT_NEAR(prof.omega_0, f.qubit_frequency(0.0), 1e-12);
}

TEST(FrequencyProfile, SweetSpotDoublesTheFrequency) {
  const sb::FluxProfile f{2.0 * kPi * 20.0, 2.0 * kPi * 0.25, 0.0, 0.05, 0.3};
  const auto prof = sb::qubit_frequency_profile(f, 256);
  const std::size_t k = prof.dominant_harmonic();
  EXPECT_NEAR(prof.harmonic_frequencies[k], 2.0 * f.nu_prime, 1e-12);
  // Odd harmonics vanish at the sweet spot.
  EXPECT_NEAR(prof.harmonics[0], 0.0, 1e-10);
}

TEST(FrequencyProfile, HarmonicsMatchDirectTransform) {
  const sb::FluxProfile f{2.0 * kPi * 20.0, 2.0 * kPi * 0.25, 0.15, 0.05, 0.3};
  const auto prof = sb::qubit_frequency_profile(f, 128);
  const auto ref = oracle::dft(prof.omega_samples);
  EXPECT_NEAR(prof.omega_0, ref[0].real() / 128.0, 1e-10);
  for (std::size_t k = 1; k < 64; ++k) EXPECT_NEAR(prof.harmonics[k - 1], 2.0 * ref[k].real() / 128.0, 1e-10);
  // The reconstruction reproduces the samples.
  for (std::size_t i = 0; i < 128; i += 7) {
    double v = prof.omega_0;
    for (std::size_t k = 0; k < prof.harmonics.size(); ++k)
      v += prof.harmonics[k] * std::cos(prof.harmonic_frequencies[k] * prof.times[i]);
    EXPECT_NEAR(v, prof.omega_samples[i], 1e-6 * prof.omega_0);
  }
  EXPECT_GT(std::abs(prof.harmonics[0]), std::abs(prof.harmonics[1]));
}

TEST(FrequencyProfile, RejectsBadInput) {
  sb::FluxProfile f{2.0 * kPi * 20.0, 2.0 * kPi * 0.25, 0.3, 0.25, 0.3};
  EXPECT_THROW(sb::qubit_frequency_profile(f, 64), nhep::InvalidArgument);
  f.phi_tilde = 0.1;
  EXPECT_THROW(sb::qubit_frequency_profile(f, 100), nhep::InvalidArgument);
  EXPECT_THROW(sb::qubit_frequency_profile(f, 32), nhep::InvalidArgument);
  f.e_j_sum = 0.0;
  EXPECT_THROW(sb::qubit_frequency_profile(f, 64), nhep::InvalidArgument);
}

}  // namespace
