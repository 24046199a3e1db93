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
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "nhep/errors.hpp"

namespace nhep {

/// One step of the SplitMix64 generator; used to derive independent,
/// reproducible sub-seeds (per grid point, per tomography setting).
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  return splitmix64(base ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

/// Seedable generator with a platform-independent output sequence.
///
/// std::mt19937_64 is fully specified by the standard; the distributions in
/// <random> are not, so uniform draws and categorical sampling are done here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed), seed_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Index drawn from a discrete distribution (weights need not sum to 1).
  std::size_t categorical(const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    const double u = uniform() * total;
    double acc = 0.0;
    std::size_t last = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (weights[i] <= 0.0) continue;
      acc += weights[i];
      last = i;
      if (u < acc) return i;
    }
    return last;
  }

  /// Multinomial counts from `shots` independent categorical draws.
  std::vector<std::int64_t> multinomial(std::int64_t shots, const std::vector<double>& probs) {
    detail::require(shots >= 1, "Rng::multinomial: shots must be >= 1");
    double total = 0.0;
    for (double p : probs) {
      detail::require(p >= 0.0, "Rng::multinomial: negative probability");
      total += p;
    }
    detail::require(total > 0.0, "Rng::multinomial: probabilities sum to zero");
    std::vector<std::int64_t> counts(probs.size(), 0);
    for (std::int64_t s = 0; s < shots; ++s) ++counts[categorical(probs)];
    return counts;
  }

  /// Standard normal deviate (Box-Muller).
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
};

}  // namespace nhep
