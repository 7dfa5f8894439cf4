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
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

/// Dense statevector simulation of few-qubit circuits.
///
/// Conventions used throughout the library:
///  - qubit q is bit q of a basis-state index (little-endian);
///  - measurement bitstrings are printed in measured order, first measured
///    qubit leftmost, so measuring q0..q3 of |q0=1,q1=1,q2=0,q3=0> prints "1100".
namespace q422 {

inline constexpr std::size_t kMaxQubits = 12;

/// Probabilities below this are dropped from distribution supports.
inline constexpr double kPruneThreshold = 1e-12;

using Amplitude = std::complex<double>;

enum class GateKind { X, Y, Z, H, S, RZ, CNOT, CZ, SWAP };

inline constexpr std::string_view gate_name(GateKind kind) {
  switch (kind) {
    case GateKind::X: return "X";
    case GateKind::Y: return "Y";
    case GateKind::Z: return "Z";
    case GateKind::H: return "H";
    case GateKind::S: return "S";
    case GateKind::RZ: return "RZ";
    case GateKind::CNOT: return "CNOT";
    case GateKind::CZ: return "CZ";
    case GateKind::SWAP: return "SWAP";
  }
  return "?";
}

inline std::optional<GateKind> gate_from_name(std::string_view name) {
  static constexpr std::array kAll{GateKind::X,  GateKind::Y,    GateKind::Z,
                                   GateKind::H,  GateKind::S,    GateKind::RZ,
                                   GateKind::CNOT, GateKind::CZ, GateKind::SWAP};
  for (GateKind k : kAll) {
    if (gate_name(k) == name) return k;
  }
  return std::nullopt;
}

inline constexpr std::size_t gate_arity(GateKind kind) {
  return (kind == GateKind::CNOT || kind == GateKind::CZ || kind == GateKind::SWAP) ? 2 : 1;
}

inline constexpr bool is_involution(GateKind kind) {
  return kind != GateKind::S && kind != GateKind::RZ;
}

/// One gate application. `qubits[0]` is the control for CNOT/CZ; `qubits[1]`
/// is unused by single-qubit gates. `angle` is meaningful only for RZ.
struct GateInstance {
  GateKind kind = GateKind::X;
  std::array<std::size_t, 2> qubits{0, 0};
  double angle = 0.0;

  std::size_t arity() const { return gate_arity(kind); }
  std::span<const std::size_t> targets() const { return {qubits.data(), arity()}; }

  friend bool operator==(const GateInstance& a, const GateInstance& b) {
    if (a.kind != b.kind || a.qubits[0] != b.qubits[0]) return false;
    if (a.arity() == 2 && a.qubits[1] != b.qubits[1]) return false;
    return a.kind != GateKind::RZ || a.angle == b.angle;
  }
};

namespace gates {
inline GateInstance x(std::size_t q) { return {GateKind::X, {q, 0}}; }
inline GateInstance y(std::size_t q) { return {GateKind::Y, {q, 0}}; }
inline GateInstance z(std::size_t q) { return {GateKind::Z, {q, 0}}; }
inline GateInstance h(std::size_t q) { return {GateKind::H, {q, 0}}; }
inline GateInstance s(std::size_t q) { return {GateKind::S, {q, 0}}; }
inline GateInstance rz(std::size_t q, double theta) { return {GateKind::RZ, {q, 0}, theta}; }
inline GateInstance cnot(std::size_t control, std::size_t target) {
  return {GateKind::CNOT, {control, target}};
}
inline GateInstance cz(std::size_t a, std::size_t b) { return {GateKind::CZ, {a, b}}; }
inline GateInstance swap(std::size_t a, std::size_t b) { return {GateKind::SWAP, {a, b}}; }
}  // namespace gates

/// Checks a gate against a register of `n_qubits`.
inline void validate_gate(const GateInstance& g, std::size_t n_qubits) {
  for (std::size_t q : g.targets()) {
    if (q >= n_qubits) {
      throw std::out_of_range("qubit index " + std::to_string(q) + " out of range for " +
                              std::to_string(n_qubits) + "-qubit register");
    }
  }
  if (g.arity() == 2 && g.qubits[0] == g.qubits[1]) {
    throw std::invalid_argument(std::string(gate_name(g.kind)) + " targets must be distinct");
  }
  if (g.kind == GateKind::RZ && !std::isfinite(g.angle)) {
    throw std::invalid_argument("RZ angle must be finite");
  }
}

struct Circuit {
  std::size_t n_qubits = 1;
  std::vector<GateInstance> gates;
  std::vector<std::size_t> measured;

  Circuit() = default;
  explicit Circuit(std::size_t n, std::vector<GateInstance> g = {}, std::vector<std::size_t> m = {})
      : n_qubits(n), gates(std::move(g)), measured(std::move(m)) {}

  Circuit& add(const GateInstance& g) {
    validate_gate(g, n_qubits);
    gates.push_back(g);
    return *this;
  }

  Circuit& add(std::span<const GateInstance> gs) {
    for (const auto& g : gs) add(g);
    return *this;
  }

  Circuit& measure_all() {
    measured.resize(n_qubits);
    for (std::size_t q = 0; q < n_qubits; ++q) measured[q] = q;
    return *this;
  }

  void validate() const {
    if (n_qubits == 0 || n_qubits > kMaxQubits) {
      throw std::invalid_argument("circuit must have between 1 and " +
                                  std::to_string(kMaxQubits) + " qubits");
    }
    for (const auto& g : gates) validate_gate(g, n_qubits);
    std::vector<bool> seen(n_qubits, false);
    for (std::size_t q : measured) {
      if (q >= n_qubits) throw std::out_of_range("measured qubit " + std::to_string(q) + " out of range");
      if (seen[q]) throw std::invalid_argument("qubit " + std::to_string(q) + " measured twice");
      seen[q] = true;
    }
  }

  friend bool operator==(const Circuit&, const Circuit&) = default;
};

/// Exact outcome probabilities keyed by measurement bitstring.
using OutcomeDistribution = std::map<std::string, double>;

struct ShotCounts {
  std::map<std::string, std::uint64_t> counts;
  std::uint64_t total = 0;

  std::uint64_t count(const std::string& bits) const {
    auto it = counts.find(bits);
    return it == counts.end() ? 0 : it->second;
  }

  void add(const std::string& bits, std::uint64_t n = 1) {
    if (n == 0) return;
    counts[bits] += n;
    total += n;
  }

  /// Empirical frequencies; empty when no shots were recorded.
  OutcomeDistribution frequencies() const {
    OutcomeDistribution out;
    if (total == 0) return out;
    for (const auto& [bits, n] : counts) out[bits] = static_cast<double>(n) / static_cast<double>(total);
    return out;
  }

  friend bool operator==(const ShotCounts&, const ShotCounts&) = default;
};

/// Packs a bitstring (leftmost char = bit 0) into an integer.
inline std::uint32_t pack_bits(std::string_view bits) {
  std::uint32_t v = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      v |= 1u << i;
    } else if (bits[i] != '0') {
      throw std::invalid_argument("bitstring may only contain 0 and 1: '" + std::string(bits) + "'");
    }
  }
  return v;
}

inline std::string unpack_bits(std::uint32_t v, std::size_t width) {
  std::string s(width, '0');
  for (std::size_t i = 0; i < width; ++i) {
    if ((v >> i) & 1u) s[i] = '1';
  }
  return s;
}

class PureState {
 public:
  explicit PureState(std::size_t n_qubits) : n_(n_qubits) {
    if (n_ == 0 || n_ > kMaxQubits) {
      throw std::invalid_argument("state must have between 1 and " + std::to_string(kMaxQubits) + " qubits");
    }
    amps_.assign(std::size_t{1} << n_, Amplitude{0.0, 0.0});
    amps_[0] = 1.0;
  }

  static PureState basis(std::size_t n_qubits, std::size_t index) {
    PureState s(n_qubits);
    if (index >= s.amps_.size()) throw std::out_of_range("basis index out of range");
    s.amps_[0] = 0.0;
    s.amps_[index] = 1.0;
    return s;
  }

  static PureState from_amplitudes(std::size_t n_qubits, std::vector<Amplitude> amps) {
    PureState s(n_qubits);
    if (amps.size() != s.amps_.size()) throw std::invalid_argument("amplitude vector must have length 2^n");
    s.amps_ = std::move(amps);
    if (std::abs(s.norm() - 1.0) > 1e-10) throw std::invalid_argument("amplitudes are not normalised");
    return s;
  }

  std::size_t n_qubits() const { return n_; }
  std::size_t dimension() const { return amps_.size(); }
  std::span<const Amplitude> amplitudes() const { return amps_; }
  const Amplitude& operator[](std::size_t i) const { return amps_[i]; }

  double norm() const {
    double acc = 0.0;
    for (const auto& a : amps_) acc += std::norm(a);
    return std::sqrt(acc);
  }

  void apply(const GateInstance& g) {
    validate_gate(g, n_);
    const std::size_t q0 = g.qubits[0];
    switch (g.kind) {
      case GateKind::X:
        for_pairs(q0, [](Amplitude& a0, Amplitude& a1) { std::swap(a0, a1); });
        break;
      case GateKind::Y:
        for_pairs(q0, [](Amplitude& a0, Amplitude& a1) {
          const Amplitude t = a0;
          a0 = Amplitude{a1.imag(), -a1.real()};   // -i * a1
          a1 = Amplitude{-t.imag(), t.real()};     //  i * a0
        });
        break;
      case GateKind::Z:
        for_pairs(q0, [](Amplitude&, Amplitude& a1) { a1 = -a1; });
        break;
      case GateKind::H: {
        const double k = std::numbers::sqrt2 / 2.0;
        for_pairs(q0, [k](Amplitude& a0, Amplitude& a1) {
          const Amplitude t = a0;
          a0 = k * (t + a1);
          a1 = k * (t - a1);
        });
        break;
      }
      case GateKind::S:
        for_pairs(q0, [](Amplitude&, Amplitude& a1) { a1 = Amplitude{-a1.imag(), a1.real()}; });
        break;
      case GateKind::RZ: {
        const Amplitude lo = std::polar(1.0, -g.angle / 2.0);
        const Amplitude hi = std::polar(1.0, g.angle / 2.0);
        for_pairs(q0, [lo, hi](Amplitude& a0, Amplitude& a1) {
          a0 *= lo;
          a1 *= hi;
        });
        break;
      }
      case GateKind::CNOT: {
        const std::size_t c = std::size_t{1} << q0, t = std::size_t{1} << g.qubits[1];
        for (std::size_t i = 0; i < amps_.size(); ++i) {
          if ((i & c) && !(i & t)) std::swap(amps_[i], amps_[i | t]);
        }
        break;
      }
      case GateKind::CZ: {
        const std::size_t m = (std::size_t{1} << q0) | (std::size_t{1} << g.qubits[1]);
        for (std::size_t i = 0; i < amps_.size(); ++i) {
          if ((i & m) == m) amps_[i] = -amps_[i];
        }
        break;
      }
      case GateKind::SWAP: {
        const std::size_t a = std::size_t{1} << q0, b = std::size_t{1} << g.qubits[1];
        for (std::size_t i = 0; i < amps_.size(); ++i) {
          if ((i & a) && !(i & b)) std::swap(amps_[i], amps_[(i & ~a) | b]);
        }
        break;
      }
    }
  }

  /// Applies a single-qubit Pauli given as 'I', 'X', 'Y' or 'Z'.
  void apply_pauli(char pauli, std::size_t q) {
    switch (pauli) {
      case 'I': return;
      case 'X': apply(gates::x(q)); return;
      case 'Y': apply(gates::y(q)); return;
      case 'Z': apply(gates::z(q)); return;
      default: throw std::invalid_argument(std::string("not a Pauli letter: ") + pauli);
    }
  }

  std::vector<double> probabilities() const {
    std::vector<double> p(amps_.size());
    std::transform(amps_.begin(), amps_.end(), p.begin(), [](const Amplitude& a) { return std::norm(a); });
    return p;
  }

 private:
  template <class F>
  void for_pairs(std::size_t q, F&& f) {
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      if (!(i & bit)) f(amps_[i], amps_[i | bit]);
    }
  }

  std::size_t n_;
  std::vector<Amplitude> amps_;
};

inline PureState apply_gate(PureState state, const GateInstance& gate) {
  state.apply(gate);
  return state;
}

/// Runs the gates of `circuit` on `state` in order.
inline void run_gates(PureState& state, const Circuit& circuit) {
  for (const auto& g : circuit.gates) state.apply(g);
}

/// Born-rule marginal over `measured`, pruned below kPruneThreshold and renormalised.
inline OutcomeDistribution measure_distribution(const PureState& state, std::span<const std::size_t> measured) {
  const std::size_t width = measured.size();
  std::vector<double> marginal(std::size_t{1} << width, 0.0);
  const auto amps = state.amplitudes();
  for (std::size_t i = 0; i < amps.size(); ++i) {
    const double p = std::norm(amps[i]);
    if (p == 0.0) continue;
    std::uint32_t key = 0;
    for (std::size_t k = 0; k < width; ++k) {
      if ((i >> measured[k]) & 1u) key |= 1u << k;
    }
    marginal[key] += p;
  }
  double kept = 0.0;
  for (double p : marginal) {
    if (p >= kPruneThreshold) kept += p;
  }
  OutcomeDistribution out;
  for (std::uint32_t key = 0; key < marginal.size(); ++key) {
    if (marginal[key] >= kPruneThreshold) out.emplace(unpack_bits(key, width), marginal[key] / kept);
  }
  return out;
}

inline PureState final_state(const Circuit& circuit) {
  circuit.validate();
  PureState s(circuit.n_qubits);
  run_gates(s, circuit);
  return s;
}

inline OutcomeDistribution ideal_distribution(const Circuit& circuit) {
  return measure_distribution(final_state(circuit), circuit.measured);
}

namespace detail {

inline constexpr std::uint64_t kShotBlock = 4096;

/// Independent engine per (seed, block, stream): results do not depend on how
/// blocks are scheduled across workers.
inline std::mt19937_64 block_engine(std::uint64_t seed, std::uint64_t block, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32), stream};
  return std::mt19937_64(seq);
}

inline constexpr std::uint32_t kOutcomeStream = 0;
inline constexpr std::uint32_t kNoiseStream = 1;

}  // namespace detail

/// Draws packed outcomes from a fixed distribution by inverse-CDF lookup.
class OutcomeSampler {
 public:
  explicit OutcomeSampler(const OutcomeDistribution& dist) {
    if (dist.empty()) throw std::invalid_argument("cannot sample from an empty distribution");
    width_ = dist.begin()->first.size();
    double acc = 0.0;
    for (const auto& [bits, p] : dist) {
      if (bits.size() != width_) throw std::invalid_argument("distribution keys have mixed lengths");
      if (!(p >= 0.0)) throw std::invalid_argument("negative probability in distribution");
      acc += p;
      outcomes_.push_back(pack_bits(bits));
      cumulative_.push_back(acc);
    }
    if (!(acc > 0.0)) throw std::invalid_argument("distribution has zero total mass");
  }

  std::size_t width() const { return width_; }

  template <class Rng>
  std::uint32_t operator()(Rng& rng) const {
    std::uniform_real_distribution<double> u(0.0, cumulative_.back());
    const double x = u(rng);
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), x);
    if (it == cumulative_.end()) --it;
    return outcomes_[static_cast<std::size_t>(it - cumulative_.begin())];
  }

 private:
  std::size_t width_ = 0;
  std::vector<std::uint32_t> outcomes_;
  std::vector<double> cumulative_;
};

namespace detail {

inline ShotCounts counts_from_table(std::span<const std::uint64_t> table, std::size_t width) {
  ShotCounts out;
  for (std::uint32_t key = 0; key < table.size(); ++key) out.add(unpack_bits(key, width), table[key]);
  return out;
}

}  // namespace detail

/// Multinomial sample of `shots` outcomes; deterministic for a fixed seed.
inline ShotCounts sample_counts(const OutcomeDistribution& dist, std::uint64_t shots, std::uint64_t seed) {
  if (shots == 0) throw std::invalid_argument("shots must be positive");
  const OutcomeSampler sampler(dist);
  std::vector<std::uint64_t> table(std::size_t{1} << sampler.width(), 0);
  for (std::uint64_t block = 0; block * detail::kShotBlock < shots; ++block) {
    auto rng = detail::block_engine(seed, block, detail::kOutcomeStream);
    const std::uint64_t n = std::min(detail::kShotBlock, shots - block * detail::kShotBlock);
    for (std::uint64_t i = 0; i < n; ++i) ++table[sampler(rng)];
  }
  return detail::counts_from_table(table, sampler.width());
}

}  // namespace q422
