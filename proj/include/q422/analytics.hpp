// Copyright 2026 The q422 Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
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
#include <optional>
#include <ostream>
#include <string_view>
#include <vector>

#include "q422/circuit_io.hpp"
#include "q422/code422.hpp"
#include "q422/noise.hpp"
#include "q422/sim.hpp"

/// Trace distance and the closed-form error model for coded and uncoded
/// gate sequences.
namespace q422 {

/// Half the L1 distance; keys missing from either side count as zero.
inline double trace_distance(const OutcomeDistribution& p, const OutcomeDistribution& q) {
  double acc = 0.0;
  auto a = p.begin(), b = q.begin();
  while (a != p.end() || b != q.end()) {
    if (b == q.end() || (a != p.end() && a->first < b->first)) {
      acc += std::abs(a->second);
      ++a;
    } else if (a == p.end() || b->first < a->first) {
      acc += std::abs(b->second);
      ++b;
    } else {
      acc += std::abs(a->second - b->second);
      ++a;
      ++b;
    }
  }
  return std::clamp(0.5 * acc, 0.0, 1.0);
}

inline double clamp_unit(double v) { return std::clamp(v, 0.0, 1.0); }

/// Probability that a 2-bit readout is wrong.
inline double measurement_error_uncoded(double p_meas) { return 2.0 * p_meas - p_meas * p_meas; }

/// Probability that a 4-bit readout survives post-selection with exactly two flips.
inline double measurement_error_coded_ps(double p_meas) {
  const double q = 1.0 - p_meas;
  return 6.0 * p_meas * p_meas * q * q;
}

inline double sequence_error(double p_block, std::uint64_t length) {
  return 1.0 - std::pow(1.0 - p_block, static_cast<double>(length));
}

struct BlockError {
  double eps1_block = 0.0;  // 1 - (1 - eps1)^n1
  double eps2_block = 0.0;  // 1 - (1 - eps2)^n2
  double p_block = 0.0;
};

/// Untruncated block error from physical gate counts.
inline BlockError block_error(std::size_t n1, std::size_t n2, double eps1, double eps2) {
  auto any_of = [](std::size_t n, double e) {
    // sum_{i=1}^{n} C(n,i) e^i
    double acc = 0.0, binom = 1.0;
    for (std::size_t i = 1; i <= n; ++i) {
      binom = binom * static_cast<double>(n - i + 1) / static_cast<double>(i);
      acc += binom * std::pow(e, static_cast<double>(i));
    }
    return acc;
  };
  BlockError b;
  b.eps1_block = any_of(n1, eps1);
  b.eps2_block = any_of(n2, eps2);
  b.p_block = b.eps1_block + b.eps2_block + b.eps1_block * b.eps2_block;
  return b;
}

/// Physical gate counts of one logical gate in both schemes.
struct BlockErrorModel {
  LogicalGate gate = LogicalGate::X0;
  std::size_t n1_uncoded = 0, n2_uncoded = 0;
  std::size_t n1_coded = 0, n2_coded = 0;
};

inline BlockErrorModel block_error_model(LogicalGate gate) {
  BlockErrorModel m{gate};
  for (const auto& g : uncoded_gate_circuit(gate)) (g.arity() == 2 ? m.n2_uncoded : m.n1_uncoded)++;
  for (const auto& g : coded_gate_circuit(gate)) (g.arity() == 2 ? m.n2_coded : m.n1_coded)++;
  return m;
}

/// Leading-order per-block error averaged over a gate set:
///   uncoded   ~ c1 eps1 + c2 eps2
///   coded r=1 ~ c1 eps1 + q1 eps1^2
///   coded ps  ~ q1 eps1^2   (two single-qubit faults inside one block)
struct GateSetCoefficients {
  double uncoded_eps1 = 0.0, uncoded_eps2 = 0.0;
  double coded_eps1 = 0.0, coded_eps1_sq = 0.0;
  double coded_ps_eps1_sq = 0.0;
};

inline GateSetCoefficients gate_set_coefficients(GateSetId id) {
  GateSetCoefficients c;
  const auto members = gate_set_members(id);
  const double k = static_cast<double>(members.size());
  for (LogicalGate g : members) {
    const auto m = block_error_model(g);
    const double pairs = static_cast<double>(m.n1_coded * (m.n1_coded - 1) / 2);
    c.uncoded_eps1 += static_cast<double>(m.n1_uncoded) / k;
    c.uncoded_eps2 += static_cast<double>(m.n2_uncoded) / k;
    c.coded_eps1 += static_cast<double>(m.n1_coded) / k;
    c.coded_eps1_sq += pairs / k;
    c.coded_ps_eps1_sq += pairs / k;
  }
  return c;
}

enum class PredictionMode {
  Printed,         // leading-order closed forms
  FullPolynomial,  // 1 - (1 - P)^L with untruncated block errors
};

enum class Scheme { Uncoded, CodedRaw, CodedPS };

inline constexpr std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::Uncoded: return "uncoded";
    case Scheme::CodedRaw: return "coded_raw";
    case Scheme::CodedPS: return "coded_ps";
  }
  return "?";
}

namespace detail {

inline double mean_block(GateSetId id, double eps1, double eps2, bool coded) {
  const auto members = gate_set_members(id);
  double acc = 0.0;
  for (LogicalGate g : members) {
    const auto m = block_error_model(g);
    acc += coded ? block_error(m.n1_coded, m.n2_coded, eps1, eps2).p_block
                 : block_error(m.n1_uncoded, m.n2_uncoded, eps1, eps2).p_block;
  }
  return acc / static_cast<double>(members.size());
}

}  // namespace detail

/// Uncoded error after L logical gates. For the reduced set the printed form is
/// (L/5)(6 eps1 + eps2) + 2 Pm - Pm^2.
inline double predict_uncoded(std::uint64_t length, const NoiseParams& p, GateSetId set = GateSetId::Reduced,
                              PredictionMode mode = PredictionMode::Printed) {
  const double L = static_cast<double>(length);
  if (mode == PredictionMode::Printed) {
    const auto c = gate_set_coefficients(set);
    return clamp_unit(L * (c.uncoded_eps1 * p.eps1 + c.uncoded_eps2 * p.eps2) +
                      measurement_error_uncoded(p.p_meas));
  }
  return clamp_unit(sequence_error(detail::mean_block(set, p.eps1, p.eps2, false), length) +
                    sequence_error(p.p_meas, 2));
}

/// Coded error without post-selection. Printed form for the reduced set:
/// eps1 + 3 eps2 + L (12/5 eps1 + 2 eps1^2) + 4 Pm - 6 Pm^2.
inline double predict_coded_raw(std::uint64_t length, const NoiseParams& p, GateSetId set = GateSetId::Reduced,
                                PredictionMode mode = PredictionMode::Printed) {
  const double L = static_cast<double>(length);
  if (mode == PredictionMode::Printed) {
    const auto c = gate_set_coefficients(set);
    return clamp_unit(p.eps1 + 3.0 * p.eps2 + L * (c.coded_eps1 * p.eps1 + c.coded_eps1_sq * p.eps1 * p.eps1) +
                      4.0 * p.p_meas - 6.0 * p.p_meas * p.p_meas);
  }
  return clamp_unit(block_error(1, 3, p.eps1, p.eps2).p_block +
                    sequence_error(detail::mean_block(set, p.eps1, p.eps2, true), length) +
                    sequence_error(p.p_meas, 4));
}

/// Coded error after post-selection, floored by the undetectable encoder
/// faults: 8 eps2/15 + 2 L eps1^2 + 6 Pm^2 for the reduced set.
inline double predict_coded_ps(std::uint64_t length, const NoiseParams& p, GateSetId set = GateSetId::Reduced,
                               PredictionMode mode = PredictionMode::Printed) {
  const double L = static_cast<double>(length);
  const auto c = gate_set_coefficients(set);
  const double floor = 8.0 * p.eps2 / 15.0;
  if (mode == PredictionMode::Printed) {
    return clamp_unit(floor + L * c.coded_ps_eps1_sq * p.eps1 * p.eps1 + 6.0 * p.p_meas * p.p_meas);
  }
  return clamp_unit(floor + sequence_error(c.coded_ps_eps1_sq * p.eps1 * p.eps1, length) +
                    measurement_error_coded_ps(p.p_meas));
}

inline double predict(Scheme s, std::uint64_t length, const NoiseParams& p, GateSetId set, PredictionMode mode) {
  switch (s) {
    case Scheme::Uncoded: return predict_uncoded(length, p, set, mode);
    case Scheme::CodedRaw: return predict_coded_raw(length, p, set, mode);
    case Scheme::CodedPS: return predict_coded_ps(length, p, set, mode);
  }
  return 0.0;
}

struct PredictionPoint {
  std::uint64_t length = 0;
  double d = 0.0;
};

struct PredictionCurve {
  Scheme scheme = Scheme::Uncoded;
  std::vector<PredictionPoint> points;
};

inline PredictionCurve prediction_curve(Scheme s, std::span<const std::uint64_t> lengths, const NoiseParams& p,
                                        GateSetId set = GateSetId::Reduced,
                                        PredictionMode mode = PredictionMode::Printed) {
  PredictionCurve curve{s, {}};
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    if (i > 0 && lengths[i] <= lengths[i - 1]) throw std::invalid_argument("lengths must be strictly increasing");
    curve.points.push_back({lengths[i], predict(s, lengths[i], p, set, mode)});
  }
  return curve;
}

/// Smallest L in [1, max_length] with coded_ps < uncoded, if any.
inline std::optional<std::uint64_t> crossover_length(const NoiseParams& p, std::uint64_t max_length,
                                                     GateSetId set = GateSetId::Reduced,
                                                     PredictionMode mode = PredictionMode::Printed) {
  for (std::uint64_t L = 1; L <= max_length; ++L) {
    if (predict_coded_ps(L, p, set, mode) < predict_uncoded(L, p, set, mode)) return L;
  }
  return std::nullopt;
}

/// CSV with header `scheme,L,D_pred`.
inline void write_prediction_csv(std::ostream& out, std::span<const PredictionCurve> curves) {
  out << "scheme,L,D_pred\n";
  for (const auto& c : curves) {
    for (const auto& pt : c.points) {
      out << to_string(c.scheme) << ',' << pt.length << ',' << detail::format_double(pt.d) << '\n';
    }
  }
}

/// Distance between `ideal` and a totally corrupted output over the same
/// alphabet; 1 - k/d for a k-outcome uniform ideal on d outcomes.
inline double worst_case_bound(const OutcomeDistribution& ideal) {
  if (ideal.empty()) throw std::invalid_argument("ideal distribution is empty");
  return trace_distance(ideal, totally_mixed(std::size_t{1} << ideal.begin()->first.size()));
}

/// Coded analogue over 4 data bits: the totally mixed readout survives
/// post-selection with r = 1/2 as the uniform distribution on the 8 even
/// strings.
inline double worst_case_bound_coded_ps(const OutcomeDistribution& coded_ideal) {
  if (coded_ideal.empty()) throw std::invalid_argument("ideal distribution is empty");
  return trace_distance(coded_ideal, post_select(totally_mixed(std::size_t{1} << kDataQubits), false).retained);
}

}  // namespace q422
