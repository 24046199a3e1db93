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
#include <string>
#include <vector>

#include "config.hpp"
#include "nhep/spectro.hpp"

namespace nhep::cli {

namespace detail {

inline json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline json complex_json(cplx v) { return json::array({finite_or_null(v.real()), finite_or_null(v.imag())}); }

/// {"columns": [...], "rows": [[...], ...]}
inline json table(const std::vector<std::string>& columns, const std::vector<std::vector<double>>& rows) {
  json r = json::array();
  for (const auto& row : rows) {
    json line = json::array();
    for (double v : row) line.push_back(finite_or_null(v));
    r.push_back(std::move(line));
  }
  return {{"columns", columns}, {"rows", std::move(r)}};
}

}  // namespace detail

/// Complex values are [re, im]; amplitudes are on {|e,0>, |g,1>}.
inline json fit_result_json(const spectro::FitResult& f) {
  const auto& p = f.params;
  json doc;
  doc["e_plus"] = detail::complex_json(p.e_plus());
  doc["e_minus"] = detail::complex_json(p.e_minus());
  doc["gap"] = detail::complex_json(p.gap());
  doc["phi_plus"] = {detail::complex_json(p.beta_plus), detail::complex_json(p.alpha_plus)};
  doc["phi_minus"] = {detail::complex_json(p.beta_minus), detail::complex_json(p.alpha_minus)};
  doc["residual"] = detail::finite_or_null(f.residual);
  doc["converged"] = f.converged;
  doc["ill_conditioned"] = f.ill_conditioned;
  doc["iterations"] = f.iterations;
  doc["best_start"] = f.best_start;
  doc["fidelities"] = f.fidelities ? json({{"plus", f.fidelities->first}, {"minus", f.fidelities->second}})
                                   : json(nullptr);
  doc["trace"] = detail::table(spectro::FitResult::trace_columns(), f.trace);
  doc["rescaled_trace"] = detail::table(spectro::FitResult::trace_columns(), f.rescaled_trace());
  return doc;
}

}  // namespace nhep::cli
