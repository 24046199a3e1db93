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

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nhep/entanglement.hpp"
#include "nhep/errors.hpp"
#include "nhep/random.hpp"
#include "nhep/state.hpp"

/// Simulated readout chain for the two-qubit register that stores the
/// qubit-resonator state: mapping decay and its inversion, finite-shot Pauli
/// tomography, confusion-matrix correction and single-excitation projection.
///
/// Register ordering follows basis::two_qubit(): the first tensor factor is
/// the ancilla that receives the resonator state, the second is the qubit.
/// Readout outcomes use the same order, {gg, ge, eg, ee}.
namespace nhep::measurement {

/// Single-qubit confusion matrix [[f_g, e_ge], [e_eg, f_e]]: column k holds
/// the outcome distribution when the qubit is in |k>, so P_meas = F P_true.
struct FidelityMatrix {
  double f_g = 1.0;
  double e_ge = 0.0;  ///< read g when in |e>
  double e_eg = 0.0;  ///< read e when in |g>
  double f_e = 1.0;

  static FidelityMatrix from_fidelities(double f_g, double f_e) { return {f_g, 1.0 - f_e, 1.0 - f_g, f_e}; }
  static FidelityMatrix identity() { return {}; }

  Eigen::Matrix2d matrix() const {
    Eigen::Matrix2d m;
    m << f_g, e_ge, e_eg, f_e;
    return m;
  }

  void validate() const {
    for (double v : {f_g, e_ge, e_eg, f_e})
      nhep::detail::require(std::isfinite(v) && v >= 0.0 && v <= 1.0, "FidelityMatrix: entries must lie in [0, 1]");
    nhep::detail::require(std::abs(f_g + e_eg - 1.0) <= 1e-12 && std::abs(e_ge + f_e - 1.0) <= 1e-12,
                          "FidelityMatrix: columns must sum to 1");
    nhep::detail::require(std::abs(matrix().determinant()) > 1e-9, "FidelityMatrix: matrix is singular");
  }
};

/// Readout calibration of the qubit and the ancilla from the device table.
inline FidelityMatrix reference_qubit_fidelity() { return FidelityMatrix::from_fidelities(0.981, 0.901); }
inline FidelityMatrix reference_ancilla_fidelity() { return FidelityMatrix::from_fidelities(0.977, 0.902); }

inline Eigen::Matrix4d joint_confusion(const FidelityMatrix& first, const FidelityMatrix& second) {
  first.validate();
  second.validate();
  const Eigen::Matrix2d a = first.matrix();
  const Eigen::Matrix2d b = second.matrix();
  Eigen::Matrix4d k;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) k.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return k;
}

// ---------------------------------------------------------------------------
// State mapping

struct MappingParams {
  double tau = 193.0;       ///< resonator-to-ancilla transfer time (ns)
  double swap_time = 12.5;  ///< qubit swap time (ns)
  double kappa_f = 0.0;     ///< resonator decay rate (1/ns)
  double t_evol = 0.0;      ///< extra storage time before the transfer (ns)

  void validate() const {
    nhep::detail::require(std::isfinite(tau) && tau > 0.0, "MappingParams: tau must be > 0");
    nhep::detail::require(std::isfinite(swap_time) && swap_time >= 0.0, "MappingParams: swap_time must be >= 0");
    nhep::detail::require(std::isfinite(kappa_f) && kappa_f >= 0.0, "MappingParams: kappa_f must be >= 0");
    nhep::detail::require(std::isfinite(t_evol) && t_evol >= 0.0, "MappingParams: t_evol must be >= 0");
  }

  /// Amplitude retained by the resonator component, e^{-kappa_f t_evol} e^{-kappa_f tau / 4}.
  double k() const {
    validate();
    return std::exp(-kappa_f * t_evol) * std::exp(-0.25 * kappa_f * tau);
  }
};

/// c1|e,0> + c2|g,1>  ->  (c1|e_a,g> + k c2|g_a,e>) / sqrt(|c1|^2 + k^2 |c2|^2).
inline PureState apply_mapping_decay(const PureState& psi, const MappingParams& map) {
  nhep::detail::require(psi.dim() == 2, "apply_mapping_decay: expected a state on {|e,0>, |g,1>}");
  const double k = map.k();
  const PureState unit = psi.normalized();
  Eigen::Vector2cd v(unit[0], k * unit[1]);
  return PureState(v, basis::mapped_single_excitation()).normalized();
}

/// Inverse of apply_mapping_decay on a 2x2 block over {|e_a,g>, |g_a,e>}:
/// off-diagonals divided by k, the |g_a,e> population by k^2, trace restored to 1.
inline DensityMatrix unmap_correction(const DensityMatrix& block, double k) {
  nhep::detail::require(block.dim() == 2, "unmap_correction: expected a 2x2 block");
  nhep::detail::require(std::isfinite(k) && k > 0.0 && k <= 1.0, "unmap_correction: k must lie in (0, 1]");
  Eigen::Matrix2cd m = block.entries;
  m(0, 1) /= k;
  m(1, 0) /= k;
  m(1, 1) /= k * k;
  const double tr = std::real(m.trace());
  if (!(tr > 0.0)) throw NumericalFailure("unmap_correction: corrected trace is not positive");
  return DensityMatrix(m / tr, basis::single_excitation(1));
}

// ---------------------------------------------------------------------------
// Readout and tomography

enum class Pauli { X = 0, Y = 1, Z = 2 };

inline char pauli_name(Pauli p) { return "XYZ"[static_cast<int>(p)]; }

inline Eigen::Matrix2cd pauli_matrix(int index) {
  Eigen::Matrix2cd m;
  switch (index) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, cplx(0, -1), cplx(0, 1), 0; break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}

struct Setting {
  Pauli first;
  Pauli second;
  std::string name() const { return std::string{pauli_name(first), pauli_name(second)}; }
};

/// The nine two-qubit Pauli measurement settings, XX, XY, ..., ZZ.
inline std::array<Setting, 9> tomography_settings() {
  std::array<Setting, 9> s{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) s[3 * i + j] = {static_cast<Pauli>(i), static_cast<Pauli>(j)};
  return s;
}

/// Outcome probabilities {gg, ge, eg, ee} for a Pauli setting; outcome g is
/// the +1 eigenvalue.
inline Eigen::Vector4d setting_probabilities(const DensityMatrix& rho, const Setting& s) {
  nhep::detail::require(rho.dim() == 4, "setting_probabilities: expected a 4x4 density matrix");
  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  const Eigen::Matrix2cd s1 = pauli_matrix(static_cast<int>(s.first) + 1);
  const Eigen::Matrix2cd s2 = pauli_matrix(static_cast<int>(s.second) + 1);
  const Eigen::Matrix2cd proj1[2] = {0.5 * (id + s1), 0.5 * (id - s1)};
  const Eigen::Matrix2cd proj2[2] = {0.5 * (id + s2), 0.5 * (id - s2)};
  Eigen::Vector4d p;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      Eigen::Matrix4cd pr;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) pr.block<2, 2>(2 * i, 2 * j) = proj1[a](i, j) * proj2[b];
      p(2 * a + b) = std::max(0.0, std::real((rho.entries * pr).trace()));
    }
  return p / p.sum();
}

/// Outcome counts per measurement setting, with the generator seed that
/// produced them.
struct ShotCounts {
  std::vector<std::string> settings;
  std::vector<std::array<std::int64_t, 4>> counts;
  std::vector<std::int64_t> shots;
  std::optional<std::uint64_t> seed;

  std::size_t size() const { return settings.size(); }

  void validate() const {
    nhep::detail::require(counts.size() == settings.size() && shots.size() == settings.size(),
                          "ShotCounts: ragged records");
    for (std::size_t i = 0; i < size(); ++i) {
      std::int64_t total = 0;
      for (auto c : counts[i]) {
        nhep::detail::require(c >= 0, "ShotCounts: negative count");
        total += c;
      }
      nhep::detail::require(shots[i] >= 1 && total == shots[i], "ShotCounts: counts do not sum to shots");
    }
  }

  /// Line-oriented text: an optional "# seed=<u64>" line, the header
  /// "setting,outcome_gg,outcome_ge,outcome_eg,outcome_ee,shots", one record per setting.
  std::string serialize() const {
    validate();
    std::ostringstream os;
    if (seed) os << "# seed=" << *seed << "\n";
    os << "setting,outcome_gg,outcome_ge,outcome_eg,outcome_ee,shots\n";
    for (std::size_t i = 0; i < size(); ++i) {
      os << settings[i];
      for (auto c : counts[i]) os << ',' << c;
      os << ',' << shots[i] << "\n";
    }
    return os.str();
  }

  static ShotCounts parse(const std::string& text) {
    ShotCounts out;
    std::istringstream is(text);
    std::string line;
    bool header = false;
    while (std::getline(is, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      if (line.rfind("# seed=", 0) == 0) {
        try {
          out.seed = std::stoull(line.substr(7));
        } catch (const std::exception&) {
          throw InvalidArgument("ShotCounts::parse: malformed seed line");
        }
        continue;
      }
      if (line[0] == '#') continue;
      if (!header) {
        nhep::detail::require(line == "setting,outcome_gg,outcome_ge,outcome_eg,outcome_ee,shots",
                              "ShotCounts::parse: unexpected header");
        header = true;
        continue;
      }
      std::vector<std::string> fields;
      std::stringstream ls(line);
      std::string f;
      while (std::getline(ls, f, ',')) fields.push_back(f);
      nhep::detail::require(fields.size() == 6, "ShotCounts::parse: expected six fields per record");
      std::array<std::int64_t, 4> c{};
      std::int64_t s = 0;
      try {
        for (int k = 0; k < 4; ++k) c[k] = std::stoll(fields[k + 1]);
        s = std::stoll(fields[5]);
      } catch (const std::exception&) {
        throw InvalidArgument("ShotCounts::parse: non-integer count");
      }
      out.settings.push_back(fields[0]);
      out.counts.push_back(c);
      out.shots.push_back(s);
    }
    nhep::detail::require(header, "ShotCounts::parse: missing header");
    out.validate();
    return out;
  }
};

/// Measured-outcome distribution (F_first (x) F_second) p_true.
inline Eigen::Vector4d measured_distribution(const Eigen::Vector4d& p_true, const FidelityMatrix& first,
                                             const FidelityMatrix& second) {
  nhep::detail::require(p_true.allFinite() && p_true.minCoeff() >= -1e-12 && std::abs(p_true.sum() - 1.0) <= 1e-9,
                        "measured_distribution: p_true is not a probability vector");
  return joint_confusion(first, second) * p_true;
}

/// Multinomial outcome counts for one setting, drawn from rng.
inline std::array<std::int64_t, 4> sample_counts(const Eigen::Vector4d& p_true, const FidelityMatrix& first,
                                                 const FidelityMatrix& second, std::int64_t shots, Rng& rng) {
  const Eigen::Vector4d pm = measured_distribution(p_true, first, second);
  const std::vector<double> probs{std::max(0.0, pm(0)), std::max(0.0, pm(1)), std::max(0.0, pm(2)),
                                  std::max(0.0, pm(3))};
  const auto c = rng.multinomial(shots, probs);
  return {c[0], c[1], c[2], c[3]};
}

/// Single-setting readout simulation; the record is labeled "ZZ".
inline ShotCounts simulate_readout(const Eigen::Vector4d& p_true, const FidelityMatrix& first,
                                   const FidelityMatrix& second, std::int64_t shots, std::uint64_t seed) {
  nhep::detail::require(shots >= 1, "simulate_readout: shots must be >= 1");
  Rng rng(seed);
  ShotCounts out;
  out.seed = seed;
  out.settings.push_back("ZZ");
  out.counts.push_back(sample_counts(p_true, first, second, shots, rng));
  out.shots.push_back(shots);
  return out;
}

/// Nine-setting tomography counts, drawn in setting order from one stream.
inline ShotCounts simulate_tomography(const DensityMatrix& rho, const FidelityMatrix& first,
                                      const FidelityMatrix& second, std::int64_t shots, Rng& rng) {
  nhep::detail::require(shots >= 1, "simulate_tomography: shots must be >= 1");
  ShotCounts out;
  out.seed = rng.seed();
  for (const Setting& s : tomography_settings()) {
    out.settings.push_back(s.name());
    out.counts.push_back(sample_counts(setting_probabilities(rho, s), first, second, shots, rng));
    out.shots.push_back(shots);
  }
  return out;
}

struct CorrectedProbabilities {
  Eigen::VectorXd raw;      ///< F^{-1} p_meas, may contain small negatives
  Eigen::VectorXd clipped;  ///< negatives set to 0, renormalized
};

namespace detail {

inline Eigen::VectorXd clip_renormalize(const Eigen::VectorXd& p) {
  Eigen::VectorXd c = p.cwiseMax(0.0);
  const double s = c.sum();
  if (!(s > 0.0)) throw NumericalFailure("correct_readout: corrected distribution has no positive weight");
  return c / s;
}

}  // namespace detail

inline CorrectedProbabilities correct_readout(const Eigen::Vector4d& p_meas, const FidelityMatrix& first,
                                              const FidelityMatrix& second) {
  nhep::detail::require(p_meas.allFinite(), "correct_readout: non-finite probabilities");
  const Eigen::Matrix4d k = joint_confusion(first, second);
  Eigen::PartialPivLU<Eigen::Matrix4d> lu(k);
  if (!(std::abs(lu.determinant()) > 1e-12)) throw NumericalFailure("correct_readout: singular confusion matrix");
  CorrectedProbabilities out;
  out.raw = lu.solve(p_meas);
  out.clipped = detail::clip_renormalize(out.raw);
  return out;
}

inline CorrectedProbabilities correct_readout(const Eigen::Vector2d& p_meas, const FidelityMatrix& f) {
  f.validate();
  const Eigen::Matrix2d m = f.matrix();
  CorrectedProbabilities out;
  out.raw = m.inverse() * p_meas;
  out.clipped = detail::clip_renormalize(out.raw);
  return out;
}

struct Reconstruction {
  DensityMatrix raw;       ///< linear inversion, Hermitian, trace 1, possibly not PSD
  DensityMatrix physical;  ///< nearest PSD trace-one matrix by eigenvalue clipping
};

/// Clip negative eigenvalues and renormalize the trace.
inline DensityMatrix project_physical(const DensityMatrix& rho) {
  const Eigen::MatrixXcd h = 0.5 * (rho.entries + rho.entries.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  const Eigen::VectorXd w = es.eigenvalues().cwiseMax(0.0);
  const double s = w.sum();
  if (!(s > 0.0)) throw NumericalFailure("project_physical: no positive spectral weight");
  Eigen::MatrixXcd m = es.eigenvectors() * (w / s).asDiagonal() * es.eigenvectors().adjoint();
  m = 0.5 * (m + m.adjoint()).eval();
  return DensityMatrix(std::move(m), rho.labels);
}

/// Linear inversion from readout-corrected probabilities, one vector per
/// setting in tomography_settings() order. Single-qubit marginals are
/// averaged over the three settings that contain them.
inline Reconstruction tomography_from_probabilities(const std::array<Eigen::Vector4d, 9>& probs,
                                                    Labels labels = basis::two_qubit()) {
  const auto settings = tomography_settings();
  const double sign[4][2] = {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
  double corr[4][4] = {};
  corr[0][0] = 1.0;
  for (std::size_t s = 0; s < 9; ++s) {
    const int i = static_cast<int>(settings[s].first) + 1;
    const int j = static_cast<int>(settings[s].second) + 1;
    double both = 0.0, a = 0.0, b = 0.0;
    for (int o = 0; o < 4; ++o) {
      both += sign[o][0] * sign[o][1] * probs[s](o);
      a += sign[o][0] * probs[s](o);
      b += sign[o][1] * probs[s](o);
    }
    corr[i][j] = both;
    corr[i][0] += a / 3.0;
    corr[0][j] += b / 3.0;
  }
  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const Eigen::Matrix2cd a = pauli_matrix(i);
      const Eigen::Matrix2cd b = pauli_matrix(j);
      Eigen::Matrix4cd kr;
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) kr.block<2, 2>(2 * r, 2 * c) = a(r, c) * b;
      rho += 0.25 * corr[i][j] * kr;
    }
  rho = 0.5 * (rho + rho.adjoint()).eval();
  Reconstruction out{DensityMatrix(rho, labels), DensityMatrix()};
  out.physical = project_physical(out.raw);
  return out;
}

inline Reconstruction tomography_reconstruct(const ShotCounts& counts, const FidelityMatrix& first,
                                             const FidelityMatrix& second) {
  counts.validate();
  std::array<Eigen::Vector4d, 9> probs;
  const auto settings = tomography_settings();
  for (std::size_t s = 0; s < 9; ++s) {
    const std::string name = settings[s].name();
    std::size_t found = counts.size();
    for (std::size_t r = 0; r < counts.size(); ++r)
      if (counts.settings[r] == name) {
        nhep::detail::require(found == counts.size(), "tomography_reconstruct: duplicate setting " + name);
        found = r;
      }
    nhep::detail::require(found < counts.size(), "tomography_reconstruct: missing setting " + name);
    Eigen::Vector4d pm;
    for (int o = 0; o < 4; ++o)
      pm(o) = static_cast<double>(counts.counts[found][o]) / static_cast<double>(counts.shots[found]);
    probs[s] = correct_readout(pm, first, second).raw;
  }
  return tomography_from_probabilities(probs);
}

/// Block on {|e_a,g>, |g_a,e>} renormalized to unit trace.
inline DensityMatrix post_project(const DensityMatrix& rho) {
  nhep::detail::require(rho.dim() == 4, "post_project: expected a 4x4 density matrix");
  const int idx[2] = {basis::kUpperIndex, basis::kLowerIndex};
  Eigen::Matrix2cd b;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) b(r, c) = rho(idx[r], idx[c]);
  const double tr = std::real(b.trace());
  if (!(tr > 1e-9)) throw NumericalFailure("post_project: single-excitation block has vanished");
  return DensityMatrix(b / tr, basis::mapped_single_excitation());
}

// ---------------------------------------------------------------------------
// End-to-end pipeline

struct PipelineOptions {
  FidelityMatrix ancilla = FidelityMatrix::identity();  ///< first register factor
  FidelityMatrix qubit = FidelityMatrix::identity();    ///< second register factor
  MappingParams mapping;
  std::optional<std::int64_t> shots;  ///< empty: exact probabilities
  bool correct_readout = true;
  bool correct_mapping = true;
};

struct PipelineResult {
  DensityMatrix register_state;  ///< true two-qubit state after mapping
  Reconstruction tomography;
  DensityMatrix block;           ///< post-projected, before unmapping
  DensityMatrix corrected;       ///< estimate of the pre-mapping no-jump state
  double concurrence = 0.0;
  double negativity = 0.0;
  std::optional<ShotCounts> counts;
};

/// Two-qubit register state produced by mapping an unnormalized no-jump state
/// c1|e,0> + c2|g,1> (norm^2 = no-jump probability). Jump events and the
/// mapping loss leave the register in |gg>.
inline DensityMatrix mapped_register_state(const PureState& propagated, const MappingParams& map) {
  nhep::detail::require(propagated.dim() == 2, "mapped_register_state: expected a state on {|e,0>, |g,1>}");
  const double k = map.k();
  Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
  v(basis::kUpperIndex) = propagated[0];
  v(basis::kLowerIndex) = k * propagated[1];
  const double kept = v.squaredNorm();
  nhep::detail::require(kept <= 1.0 + 1e-12, "mapped_register_state: state norm exceeds 1");
  Eigen::Matrix4cd rho = v * v.adjoint();
  rho(0, 0) += std::max(0.0, 1.0 - kept);
  return DensityMatrix(rho, basis::two_qubit());
}

inline PipelineResult run_pipeline(const PureState& propagated, const PipelineOptions& opt, Rng& rng) {
  PipelineResult out;
  out.register_state = mapped_register_state(propagated, opt.mapping);
  const FidelityMatrix id = FidelityMatrix::identity();
  const FidelityMatrix& fa = opt.correct_readout ? opt.ancilla : id;
  const FidelityMatrix& fq = opt.correct_readout ? opt.qubit : id;
  if (opt.shots) {
    ShotCounts counts = simulate_tomography(out.register_state, opt.ancilla, opt.qubit, *opt.shots, rng);
    out.tomography = tomography_reconstruct(counts, fa, fq);
    out.counts = std::move(counts);
  } else {
    std::array<Eigen::Vector4d, 9> probs;
    const auto settings = tomography_settings();
    for (std::size_t s = 0; s < 9; ++s) {
      const Eigen::Vector4d pm =
          measured_distribution(setting_probabilities(out.register_state, settings[s]), opt.ancilla, opt.qubit);
      probs[s] = correct_readout(pm, fa, fq).raw;
    }
    out.tomography = tomography_from_probabilities(probs);
  }
  out.block = post_project(out.tomography.physical);
  out.corrected = opt.correct_mapping ? unmap_correction(out.block, opt.mapping.k())
                                      : DensityMatrix(out.block.entries, basis::single_excitation(1));
  const DensityMatrix embedded = embed_single_excitation(out.corrected, basis::two_qubit());
  out.concurrence = entanglement::concurrence(embedded);
  out.negativity = entanglement::negativity(embedded);
  return out;
}

}  // namespace nhep::measurement
