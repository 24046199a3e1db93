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
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "fit_json.hpp"
#include "format.hpp"
#include "nhep/nhep.hpp"
#include "svg.hpp"

namespace nhep::cli {

/// Run-wide settings shared by every command.
struct Context {
  std::filesystem::path out_dir;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  bool svg = false;
  std::vector<std::string> outputs;

  void write(const std::string& name, const std::string& content) {
    write_file(out_dir / name, content);
    outputs.push_back(name);
  }
};

/// Raised after outputs are written when a result is flagged as untrustworthy
/// (for example a fit that hit its iteration cap).
struct Flagged : NumericalFailure {
  using NumericalFailure::NumericalFailure;
};

namespace detail {

inline std::vector<double> eta_axis(Block& b, double lo, double hi, double step) {
  const auto values = b.numbers("eta_values", {});
  const double mn = b.number("eta_min", lo), mx = b.number("eta_max", hi), st = b.number("eta_step", step);
  if (!values.empty()) return values;
  return uniform_grid(mn, mx, st, b.name() + " eta grid");
}

inline void require_positive_decay_difference(double kq, double kf, const std::string& where) {
  if (kf == kq) throw InvalidArgument(where + ": eta is undefined when kappa_f_mhz == kappa_q_mhz");
}

struct Readout {
  measurement::PipelineOptions options;

  static Readout resolve(Block& b) {
    Readout r;
    auto& o = r.options;
    const auto fq = measurement::reference_qubit_fidelity(), fa = measurement::reference_ancilla_fidelity();
    o.qubit = measurement::FidelityMatrix::from_fidelities(b.number("qubit_f_g", fq.f_g), b.number("qubit_f_e", fq.f_e));
    o.ancilla = measurement::FidelityMatrix::from_fidelities(b.number("ancilla_f_g", fa.f_g),
                                                             b.number("ancilla_f_e", fa.f_e));
    o.mapping.tau = b.number("tau_ns", 193.0);
    o.mapping.swap_time = b.number("swap_time_ns", 12.5);
    o.mapping.t_evol = b.number("t_evol_ns", 0.0);
    o.correct_readout = b.boolean("correct_readout", true);
    o.correct_mapping = b.boolean("correct_mapping", true);
    o.shots = b.nullable_integer("shots", 3000);
    if (o.shots && *o.shots < 1) b.fail("shots", "must be >= 1 or null");
    o.qubit.validate();
    o.ancilla.validate();
    return r;
  }
};

}  // namespace detail

// ---------------------------------------------------------------------------
// eigen-sweep

struct EigenSweep {
  double kappa_q = 0.0, kappa_f = 0.005;
  std::vector<double> eta;

  static EigenSweep resolve(Block& b) {
    EigenSweep s;
    s.kappa_q = units::rate_from_mhz(b.number("kappa_q_mhz", 0.0));
    s.kappa_f = units::rate_from_mhz(b.number("kappa_f_mhz", 5.0));
    s.eta = detail::eta_axis(b, 0.1, 6.0, 0.05);
    b.finish();
    return s;
  }

  void run(Context& ctx) const {
    const auto rows = spectro::ep_sweep_analytic(eta, kappa_q, kappa_f);
    CsvWriter csv({"eta", "re_gap", "im_gap", "conc_plus", "conc_minus", "dconc_plus", "dconc_minus", "phase_diff"});
    for (const auto& r : rows)
      csv.row({r.eta, r.re_gap, r.im_gap, r.conc_plus, r.conc_minus, r.dconc_plus, r.dconc_minus, r.phase_diff});
    ctx.write("eigen_sweep.csv", csv.str());
    if (ctx.svg) {
      std::vector<double> x, cp, cm, re, im;
      for (const auto& r : rows) {
        x.push_back(r.eta);
        cp.push_back(r.conc_plus);
        cm.push_back(r.conc_minus);
        const double k = std::abs(kappa_f - kappa_q);
        re.push_back(r.re_gap / k);
        im.push_back(r.im_gap / k);
      }
      ctx.write("eigen_sweep.svg", svg::line_plot("Eigenstate concurrence and gap", "eta", "value", x,
                                                  {{"conc_plus", cp}, {"conc_minus", cm}, {"re_gap / kappa", re},
                                                   {"im_gap / kappa", im}}));
    }
  }
};

// ---------------------------------------------------------------------------
// evolve

struct Evolve {
  model::NhParams params;
  double t_max = 0.0;
  std::int64_t samples = 301;

  static Evolve resolve(Block& b) {
    Evolve s;
    const auto eta = b.nullable_number("eta", 5.0);
    const auto omega = b.nullable_number("omega_mhz", std::nullopt);
    const double kq = units::rate_from_mhz(b.number("kappa_q_mhz", 0.0));
    const double kf = units::rate_from_mhz(b.number("kappa_f_mhz", 5.0));
    const auto n = b.integer("n", 1);
    if (n < 1 || n > 1000) b.fail("n", "must be in [1, 1000]");
    if (eta.has_value() == omega.has_value()) b.fail("", "needs exactly one of eta and omega_mhz (set the other to null)");
    if (eta) {
      detail::require_positive_decay_difference(kq, kf, "evolve");
      s.params = model::NhParams::from_eta(*eta, kq, kf, static_cast<int>(n));
    } else {
      s.params = {units::angular_from_mhz(*omega), kq, kf, static_cast<int>(n)};
      s.params.validate();
    }
    const auto t_max = b.nullable_number("t_max_ns", std::nullopt);
    s.samples = b.integer("samples", 301);
    if (s.samples < 2) b.fail("samples", "must be >= 2");
    if (t_max) {
      if (!(*t_max > 0.0)) b.fail("t_max_ns", "must be > 0");
      s.t_max = *t_max;
    } else {
      s.t_max = 3.0 * dynamics::characteristic_time(s.params);
    }
    b.finish();
    return s;
  }

  void run(Context& ctx) const {
    CsvWriter csv({"t", "p_nojump", "p_e", "p_g", "concurrence", "re_c_e", "im_c_e", "re_c_g", "im_c_g"});
    std::vector<double> ts, pe, pg, conc, pn;
    for (std::int64_t i = 0; i < samples; ++i) {
      const double t = t_max * static_cast<double>(i) / static_cast<double>(samples - 1);
      const PureState raw = model::propagated_state(params, t);
      const double norm2 = raw.norm_squared();
      const PureState u = raw.normalized();
      const double c = model::no_jump_concurrence(params, t);
      csv.row({t, norm2, std::norm(u[0]), std::norm(u[1]), c, u[0].real(), u[0].imag(), u[1].real(), u[1].imag()});
      ts.push_back(t);
      pn.push_back(norm2);
      pe.push_back(std::norm(u[0]));
      pg.push_back(std::norm(u[1]));
      conc.push_back(c);
    }
    ctx.write("evolve.csv", csv.str());
    if (ctx.svg)
      ctx.write("evolve.svg", svg::line_plot("No-jump evolution", "t (ns)", "value", ts,
                                             {{"p_e", pe}, {"p_g", pg}, {"concurrence", conc}, {"p_nojump", pn}}));
  }
};

// ---------------------------------------------------------------------------
// full-vs-effective

struct FullVsEffective {
  std::vector<double> eta;
  dynamics::ComparisonSetup base;
  std::int64_t output_every = 10;

  static FullVsEffective resolve(Block& b) {
    FullVsEffective s;
    s.eta = b.numbers("eta_values", {5.0, 0.5});
    if (s.eta.empty()) b.fail("eta_values", "must not be empty");
    s.base.decay.kappa_q = units::rate_from_mhz(b.number("kappa_q_mhz", 0.0));
    s.base.decay.kappa_f = units::rate_from_mhz(b.number("kappa_f_mhz", 5.0));
    detail::require_positive_decay_difference(s.base.decay.kappa_q, s.base.decay.kappa_f, "full_vs_effective");
    s.base.g_r = units::angular_from_mhz(b.number("g_r_mhz", 2.5));
    s.base.nu = units::angular_from_mhz(b.number("nu_mhz", 125.0));
    s.base.sideband_order = static_cast<int>(b.integer("sideband_order", 1));
    s.base.fock_cutoff = static_cast<int>(b.integer("fock_cutoff", 3));
    s.base.periods = b.number("periods", 3.0);
    s.base.dt = b.number("dt_ns", 0.0);
    s.output_every = b.integer("output_every", 10);
    if (s.output_every < 1) b.fail("output_every", "must be >= 1");
    if (!(s.base.periods > 0.0)) b.fail("periods", "must be > 0");
    if (s.base.dt < 0.0) b.fail("dt_ns", "must be >= 0 (0 selects the default step)");
    b.finish();
    return s;
  }

  void run(Context& ctx) const {
    std::vector<dynamics::Comparison> results(eta.size());
    parallel_for(eta.size(), ctx.threads, [&](std::size_t i) {
      auto s = base;
      s.eta = eta[i];
      results[i] = dynamics::compare_full_effective(s);
    });
    CsvWriter summary({"eta", "mu", "omega_mhz", "max_population_deviation", "max_concurrence_deviation",
                       "fast_residual"});
    for (std::size_t i = 0; i < eta.size(); ++i) {
      const auto& r = results[i];
      summary.row({eta[i], r.modulation.mu(), units::mhz_from_angular(r.omega), r.max_population_deviation,
                   r.max_concurrence_deviation, r.fast_residual});
      CsvWriter csv({"t", "p_e0_effective", "p_e0_full", "conc_effective", "conc_full"});
      std::vector<double> ts, pe, pf, ce, cf;
      for (std::size_t k = 0; k < r.times.size(); k += static_cast<std::size_t>(output_every)) {
        csv.row({r.times[k], r.p_e0_effective[k], r.p_e0_full[k], r.conc_effective[k], r.conc_full[k]});
        ts.push_back(r.times[k]);
        pe.push_back(r.p_e0_effective[k]);
        pf.push_back(r.p_e0_full[k]);
        ce.push_back(r.conc_effective[k]);
        cf.push_back(r.conc_full[k]);
      }
      const std::string stem = "full_vs_effective_eta_" + tag(eta[i]);
      ctx.write(stem + ".csv", csv.str());
      if (ctx.svg)
        ctx.write(stem + ".svg", svg::line_plot("Full vs effective, eta = " + tag(eta[i]), "t (ns)", "value", ts,
                                                {{"p_e0_effective", pe}, {"p_e0_full", pf},
                                                 {"conc_effective", ce}, {"conc_full", cf}}));
    }
    ctx.write("full_vs_effective_summary.csv", summary.str());
  }
};

// ---------------------------------------------------------------------------
// sideband-map

struct SidebandMapCommand {
  sideband::ModulationParams base;
  dynamics::DecayRates decay;
  std::vector<double> mu, nu;
  double duration = 1000.0;

  static SidebandMapCommand resolve(Block& b) {
    SidebandMapCommand s;
    s.base.g_r = units::angular_from_mhz(b.number("g_r_mhz", 2.5));
    s.base.delta_r = units::angular_from_mhz(b.number("delta_r_mhz", 50.0));
    s.base.fock_cutoff = static_cast<int>(b.integer("fock_cutoff", 2));
    s.decay.kappa_q = units::rate_from_mhz(b.number("kappa_q_mhz", 0.0));
    s.decay.kappa_f = units::rate_from_mhz(b.number("kappa_f_mhz", 0.0));
    const double mu_lo = b.number("mu_min", 0.0), mu_hi = b.number("mu_max", 3.0);
    const auto mu_n = b.integer("mu_steps", 31);
    const double nu_lo = b.number("nu_min_mhz", 20.0), nu_hi = b.number("nu_max_mhz", 60.0);
    const auto nu_n = b.integer("nu_steps", 41);
    s.duration = b.number("duration_ns", 1000.0);
    b.finish();
    s.mu = linspace(mu_lo, mu_hi, mu_n, "sideband_map mu grid");
    for (double v : linspace(nu_lo, nu_hi, nu_n, "sideband_map nu grid")) s.nu.push_back(units::angular_from_mhz(v));
    return s;
  }

  void run(Context& ctx) const {
    const auto map = dynamics::sideband_scan(base, decay, mu, nu, duration, ctx.threads);
    CsvWriter csv({"mu", "nu_mhz", "epsilon_mhz", "p_excited"});
    std::vector<double> nu_mhz;
    for (double v : nu) nu_mhz.push_back(units::mhz_from_angular(v));
    for (std::size_t i = 0; i < mu.size(); ++i)
      for (std::size_t j = 0; j < nu.size(); ++j) csv.row({mu[i], nu_mhz[j], mu[i] * nu_mhz[j], map.at(i, j)});
    ctx.write("sideband_map.csv", csv.str());
    if (ctx.svg)
      ctx.write("sideband_map.svg",
                svg::heat_map("Excited population after modulation", "nu (MHz)", "mu", nu_mhz, mu, map.p_excited));
  }
};

// ---------------------------------------------------------------------------
// pipeline

struct Pipeline {
  double kappa_q = 0.0, kappa_f = 0.005;
  std::vector<double> eta, times;
  measurement::PipelineOptions options;

  static Pipeline resolve(Block& b) {
    Pipeline s;
    s.kappa_q = units::rate_from_mhz(b.number("kappa_q_mhz", 0.0));
    s.kappa_f = units::rate_from_mhz(b.number("kappa_f_mhz", 5.0));
    detail::require_positive_decay_difference(s.kappa_q, s.kappa_f, "pipeline");
    s.eta = detail::eta_axis(b, 0.2, 3.0, 0.2);
    const double t_max = b.number("t_max_ns", 600.0);
    const auto t_steps = b.integer("t_steps", 31);
    s.options = detail::Readout::resolve(b).options;
    s.options.mapping.kappa_f = s.kappa_f;
    b.finish();
    if (!(t_max > 0.0)) throw InvalidArgument("config: pipeline.t_max_ns must be > 0");
    s.times = linspace(0.0, t_max, t_steps, "pipeline time grid");
    return s;
  }

  void run(Context& ctx) const {
    struct Point {
      double p_e0, conc, neg, p_e0_exact, conc_exact;
      std::uint64_t seed;
    };
    const std::size_t nt = times.size();
    std::vector<Point> pts(eta.size() * nt);
    parallel_for(pts.size(), ctx.threads, [&](std::size_t idx) {
      const auto p = model::NhParams::from_eta(eta[idx / nt], kappa_q, kappa_f);
      const double t = times[idx % nt];
      const std::uint64_t seed = derive_seed(ctx.seed, idx);
      Rng rng(seed);
      const auto r = measurement::run_pipeline(model::propagated_state(p, t), options, rng);
      const PureState exact = model::no_jump_state(p, t);
      pts[idx] = {std::real(r.corrected(0, 0)), r.concurrence, r.negativity, std::norm(exact[0]),
                  model::no_jump_concurrence(p, t), seed};
    });
    auto seed_str = [&](const Point& q) { return options.shots ? std::to_string(q.seed) : std::string("none"); };
    CsvWriter heat({"eta", "t", "p_e0", "concurrence", "negativity", "p_e0_analytic", "concurrence_analytic", "seed"});
    for (std::size_t idx = 0; idx < pts.size(); ++idx) {
      const auto& q = pts[idx];
      heat.row_strings({fmt(eta[idx / nt]), fmt(times[idx % nt]), fmt(q.p_e0), fmt(q.conc), fmt(q.neg),
                        fmt(q.p_e0_exact), fmt(q.conc_exact), seed_str(q)});
    }
    ctx.write("pipeline_heatmap.csv", heat.str());
    for (std::size_t i = 0; i < eta.size(); ++i) {
      CsvWriter tr({"t", "p_e0", "concurrence", "p_e0_analytic", "concurrence_analytic", "seed"});
      std::vector<double> c, ca;
      for (std::size_t k = 0; k < nt; ++k) {
        const auto& q = pts[i * nt + k];
        tr.row_strings({fmt(times[k]), fmt(q.p_e0), fmt(q.conc), fmt(q.p_e0_exact), fmt(q.conc_exact), seed_str(q)});
        c.push_back(q.conc);
        ca.push_back(q.conc_exact);
      }
      const std::string stem = "pipeline_trace_eta_" + tag(eta[i]);
      ctx.write(stem + ".csv", tr.str());
      if (ctx.svg)
        ctx.write(stem + ".svg", svg::line_plot("Concurrence, eta = " + tag(eta[i]), "t (ns)", "concurrence", times,
                                                {{"pipeline", c}, {"analytic", ca}}));
    }
    if (ctx.svg) {
      std::vector<double> z;
      for (const auto& q : pts) z.push_back(q.conc);
      ctx.write("pipeline_heatmap.svg", svg::heat_map("Concurrence", "t (ns)", "eta", times, eta, z));
    }
  }
};

// ---------------------------------------------------------------------------
// fit-spectrum

struct FitSpectrum {
  double kappa_q = 0.0, kappa_f = 0.005;
  std::vector<double> eta;
  std::int64_t samples = 60;
  double periods = 3.0;
  std::optional<double> t_max;
  int starts = 8;
  int max_iterations = 2000;
  measurement::PipelineOptions options;

  static FitSpectrum resolve(Block& b) {
    FitSpectrum s;
    s.kappa_q = units::rate_from_mhz(b.number("kappa_q_mhz", 0.0));
    s.kappa_f = units::rate_from_mhz(b.number("kappa_f_mhz", 5.0));
    detail::require_positive_decay_difference(s.kappa_q, s.kappa_f, "fit_spectrum");
    s.eta = b.numbers("eta_values", {0.5, 2.0, 5.0});
    if (s.eta.empty()) b.fail("eta_values", "must not be empty");
    s.samples = b.integer("samples", 60);
    if (s.samples < 4) b.fail("samples", "must be >= 4");
    s.periods = b.number("periods", 3.0);
    if (!(s.periods > 0.0)) b.fail("periods", "must be > 0");
    s.t_max = b.nullable_number("t_max_ns", std::nullopt);
    if (s.t_max && !(*s.t_max > 0.0)) b.fail("t_max_ns", "must be > 0 or null");
    s.starts = static_cast<int>(b.integer("starts", 8));
    if (s.starts < 1) b.fail("starts", "must be >= 1");
    s.max_iterations = static_cast<int>(b.integer("max_iterations", 2000));
    if (s.max_iterations < 1) b.fail("max_iterations", "must be >= 1");
    s.options = detail::Readout::resolve(b).options;
    s.options.mapping.kappa_f = s.kappa_f;
    b.finish();
    return s;
  }

  /// t_max_ns if set, else `periods` characteristic times capped where the
  /// no-jump probability has fallen to about e^-4 (beyond that the register
  /// is almost always in |gg> and tomography of the block is shot noise).
  double window(const model::NhParams& p) const {
    if (t_max) return *t_max;
    return std::min(periods * dynamics::characteristic_time(p), 8.0 / p.gamma());
  }

  void run(Context& ctx) const {
    std::vector<spectro::FitResult> fits(eta.size());
    std::vector<std::uint64_t> seeds(eta.size());
    parallel_for(eta.size(), ctx.threads, [&](std::size_t i) {
      const auto p = model::NhParams::from_eta(eta[i], kappa_q, kappa_f);
      const double span = window(p);
      seeds[i] = derive_seed(ctx.seed, i);
      Rng rng(seeds[i]);
      std::vector<spectro::DensitySample> series;
      for (std::int64_t k = 0; k < samples; ++k) {
        const double t = span * static_cast<double>(k) / static_cast<double>(samples - 1);
        series.push_back({t, measurement::run_pipeline(model::propagated_state(p, t), options, rng).corrected});
      }
      spectro::FitOptions fo;
      fo.mean_energy = p.mean_energy();
      fo.starts = starts;
      fo.seed = derive_seed(seeds[i], 1);
      fo.threads = 1;
      fo.optimizer.max_iterations = max_iterations;
      fo.eta_hint = eta[i];
      fo.reference = model::eigen_system(p);
      fits[i] = spectro::fit_spectrum(series, std::nullopt, fo);
    });

    CsvWriter summary({"eta", "t_max", "re_e_plus", "im_e_plus", "re_e_minus", "im_e_minus", "re_gap", "im_gap",
                       "re_gap_analytic", "im_gap_analytic", "fidelity_plus", "fidelity_minus", "residual",
                       "iterations", "converged", "ill_conditioned", "seed"});
    std::size_t unconverged = 0;
    for (std::size_t i = 0; i < eta.size(); ++i) {
      const auto& f = fits[i];
      const auto ref = model::eigen_system(model::NhParams::from_eta(eta[i], kappa_q, kappa_f));
      const std::string seed = options.shots ? std::to_string(seeds[i]) : std::string("none");
      summary.row_strings({fmt(eta[i]), fmt(window(model::NhParams::from_eta(eta[i], kappa_q, kappa_f))),
                           fmt(f.params.c_plus_1), fmt(f.params.c_plus_2), fmt(f.params.c_minus_1),
                           fmt(f.params.c_minus_2), fmt(f.params.gap().real()), fmt(f.params.gap().imag()),
                           fmt(ref.gap.real()), fmt(ref.gap.imag()), fmt(f.fidelities->first),
                           fmt(f.fidelities->second), fmt(f.residual), std::to_string(f.iterations),
                           f.converged ? "1" : "0", f.ill_conditioned ? "1" : "0", seed});
      json doc = fit_result_json(f);
      doc["eta"] = eta[i];
      doc["seed"] = options.shots ? json(seeds[i]) : json(nullptr);
      ctx.write("fit_eta_" + tag(eta[i]) + ".json", doc.dump(2) + "\n");
      if (ctx.svg) {
        const auto rescaled = f.rescaled_trace();
        std::vector<double> it;
        std::vector<svg::Series> cols;
        const auto names = spectro::FitResult::trace_columns();
        for (const auto& n : names) cols.push_back({n, {}});
        for (std::size_t r = 0; r < rescaled.size(); ++r) {
          it.push_back(static_cast<double>(r));
          for (std::size_t c = 0; c < names.size(); ++c) cols[c].y.push_back(rescaled[r][c]);
        }
        ctx.write("fit_eta_" + tag(eta[i]) + ".svg",
                  svg::line_plot("Fit convergence, eta = " + tag(eta[i]), "iteration", "rescaled value", it, cols));
      }
      if (!f.converged) ++unconverged;
    }
    ctx.write("fit_summary.csv", summary.str());
    if (unconverged)
      throw Flagged("fit-spectrum: " + std::to_string(unconverged) + " fit(s) did not converge; see fit_summary.csv");
  }
};

// ---------------------------------------------------------------------------
// two-qubit

struct TwoQubit {
  double kappa_1 = 0.0, kappa_2 = 0.005;
  std::vector<double> eta;

  static TwoQubit resolve(Block& b) {
    TwoQubit s;
    s.kappa_1 = units::rate_from_mhz(b.number("kappa_1_mhz", 0.0));
    s.kappa_2 = units::rate_from_mhz(b.number("kappa_2_mhz", 5.0));
    detail::require_positive_decay_difference(s.kappa_1, s.kappa_2, "two_qubit");
    s.eta = detail::eta_axis(b, 0.1, 3.0, 0.05);
    b.finish();
    return s;
  }

  void run(Context& ctx) const {
    const PureState ep(Eigen::Vector2cd(1.0, -kI) / std::sqrt(2.0), basis::two_qubit_single_excitation());
    CsvWriter csv({"eta", "omega_mhz", "re_gap", "im_gap", "conc_plus", "conc_minus", "fidelity_ep_plus",
                   "fidelity_ep_minus"});
    std::vector<double> cp, cm;
    for (double e : eta) {
      if (!(e >= 0.0)) throw InvalidArgument("two_qubit: eta values must be >= 0");
      model::TwoQubitNhParams p{e * std::abs(kappa_2 - kappa_1) / 4.0, kappa_1, kappa_2};
      const auto r = model::two_qubit_eigen(p);
      const double fp = entanglement::state_fidelity(ep, r.system.phi_plus);
      const double fm = entanglement::state_fidelity(ep, r.system.phi_minus);
      csv.row({e, units::mhz_from_angular(p.omega), r.system.gap.real(), r.system.gap.imag(), r.concurrence.plus,
               r.concurrence.minus, fp, fm});
      cp.push_back(r.concurrence.plus);
      cm.push_back(r.concurrence.minus);
    }
    ctx.write("two_qubit.csv", csv.str());
    if (ctx.svg)
      ctx.write("two_qubit.svg", svg::line_plot("Two-qubit eigenstate concurrence", "eta", "concurrence", eta,
                                                {{"conc_plus", cp}, {"conc_minus", cm}}));
  }
};

}  // namespace nhep::cli
