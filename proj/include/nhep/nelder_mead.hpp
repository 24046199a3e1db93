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
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "nhep/errors.hpp"

namespace nhep::optimize {

struct NelderMeadOptions {
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
  double f_tolerance = 1e-12;  ///< stop when max f - min f over the simplex drops below this
  int max_iterations = 2000;
  int restarts = 2;            ///< fresh simplices around the best point after convergence
};

struct NelderMeadResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  /// Best vertex and its value after every iteration.
  std::vector<Eigen::VectorXd> x_history;
  std::vector<double> f_history;
};

/// Derivative-free simplex minimization of f : R^d -> R. The initial simplex
/// is x0 plus one step per coordinate. Non-finite objective values are
/// treated as +infinity.
template <typename F>
NelderMeadResult nelder_mead(F&& f, const Eigen::VectorXd& x0, const Eigen::VectorXd& steps,
                             const NelderMeadOptions& opt = {}) {
  const Eigen::Index d = x0.size();
  nhep::detail::require(d >= 1 && steps.size() == d, "nelder_mead: dimension mismatch");
  auto eval = [&](const Eigen::VectorXd& x) {
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };

  NelderMeadResult res;
  res.x = x0;
  res.value = eval(x0);
  std::vector<Eigen::VectorXd> simplex(d + 1);
  std::vector<double> fv(d + 1);
  std::vector<std::size_t> order(d + 1);

  for (int round = 0; round <= opt.restarts && res.iterations < opt.max_iterations; ++round) {
    const double scale = std::pow(0.5, round);
    simplex[0] = res.x;
    fv[0] = res.value;
    for (Eigen::Index i = 0; i < d; ++i) {
      simplex[i + 1] = res.x;
      simplex[i + 1](i) += scale * steps(i);
      fv[i + 1] = eval(simplex[i + 1]);
    }
    bool done = false;
    while (res.iterations < opt.max_iterations) {
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
      const std::size_t best = order.front(), worst = order.back(), second = order[d - 1];
      if (fv[worst] - fv[best] < opt.f_tolerance) {
        done = true;
        break;
      }
      ++res.iterations;
      Eigen::VectorXd centroid = Eigen::VectorXd::Zero(d);
      for (std::size_t k = 0; k < order.size() - 1; ++k) centroid += simplex[order[k]];
      centroid /= static_cast<double>(d);

      const Eigen::VectorXd xr = centroid + opt.reflection * (centroid - simplex[worst]);
      const double fr = eval(xr);
      if (fr < fv[best]) {
        const Eigen::VectorXd xe = centroid + opt.expansion * (xr - centroid);
        const double fe = eval(xe);
        if (fe < fr) {
          simplex[worst] = xe;
          fv[worst] = fe;
        } else {
          simplex[worst] = xr;
          fv[worst] = fr;
        }
      } else if (fr < fv[second]) {
        simplex[worst] = xr;
        fv[worst] = fr;
      } else {
        const bool outside = fr < fv[worst];
        const Eigen::VectorXd xc = outside ? Eigen::VectorXd(centroid + opt.contraction * (xr - centroid))
                                           : Eigen::VectorXd(centroid + opt.contraction * (simplex[worst] - centroid));
        const double fc = eval(xc);
        if (fc < std::min(fr, fv[worst])) {
          simplex[worst] = xc;
          fv[worst] = fc;
        } else {
          for (std::size_t k = 0; k < simplex.size(); ++k) {
            if (k == best) continue;
            simplex[k] = simplex[best] + opt.shrink * (simplex[k] - simplex[best]);
            fv[k] = eval(simplex[k]);
          }
        }
      }
      const std::size_t b = static_cast<std::size_t>(std::min_element(fv.begin(), fv.end()) - fv.begin());
      res.x_history.push_back(simplex[b]);
      res.f_history.push_back(fv[b]);
    }
    const std::size_t b = static_cast<std::size_t>(std::min_element(fv.begin(), fv.end()) - fv.begin());
    const double previous = res.value;
    res.x = simplex[b];
    res.value = fv[b];
    res.converged = done;
    if (!done) break;
    if (round > 0 && previous - res.value < opt.f_tolerance) break;
  }
  return res;
}

}  // namespace nhep::optimize
