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

#include <atomic>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "q422/sim.hpp"

namespace q422 {

/// Every error knob of the model.
struct NoiseParams {
  double eps1 = 0.0;    // single-qubit gate fault probability
  double eps2 = 0.0;    // two-qubit gate fault probability
  double p_meas = 0.0;  // per-bit readout flip probability
  double p_prep = 0.0;  // per-qubit X before the first gate
  double theta = 0.0;   // coherent RZ angle inserted after the encoder Hadamard
  double xi = 0.0;      // global depolarizing strength (distribution level)

  void validate() const {
    auto prob = [](double p, const char* name) {
      if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument(std::string(name) + " must lie in [0,1]");
    };
    prob(eps1, "eps1");
    prob(eps2, "eps2");
    prob(p_meas, "p_meas");
    prob(p_prep, "p_prep");
    prob(xi, "xi");
    if (!std::isfinite(theta)) throw std::invalid_argument("theta must be finite");
  }

  bool stochastic_free() const { return eps1 == 0.0 && eps2 == 0.0 && p_meas == 0.0 && p_prep == 0.0; }

  friend bool operator==(const NoiseParams&, const NoiseParams&) = default;
};

/// The 4^arity - 1 non-identity Pauli strings, in lexicographic order over
/// I < X < Y < Z. Letter i acts on the gate's i-th target.
inline const std::vector<std::string>& nontrivial_paulis(std::size_t arity) {
  static const std::vector<std::string> one{"X", "Y", "Z"};
  static const std::vector<std::string> two = [] {
    std::vector<std::string> v;
    for (char a : std::string_view("IXYZ")) {
      for (char b : std::string_view("IXYZ")) {
        if (a != 'I' || b != 'I') v.push_back(std::string{a, b});
      }
    }
    return v;
  }();
  if (arity == 1) return one;
  if (arity == 2) return two;
  throw std::invalid_argument("Pauli faults are defined for 1- and 2-qubit gates");
}

struct PauliFault {
  std::size_t gate_index = 0;
  std::string pauli;

  friend bool operator==(const PauliFault&, const PauliFault&) = default;
};

/// Fault probability attached to a gate. RZ is a virtual, noiseless gate.
inline double fault_probability(GateKind kind, const NoiseParams& params) {
  if (kind == GateKind::RZ) return 0.0;
  return gate_arity(kind) == 2 ? params.eps2 : params.eps1;
}

namespace detail {

/// -1 for no fault, otherwise an index into nontrivial_paulis(arity).
template <class Rng>
int sample_fault_index(std::size_t arity, double p, Rng& rng) {
  if (p <= 0.0) return -1;
  if (!std::bernoulli_distribution(p)(rng)) return -1;
  const int n = arity == 2 ? 15 : 3;
  return std::uniform_int_distribution<int>(0, n - 1)(rng);
}

}  // namespace detail

/// Depolarizing fault after a gate: nothing with probability 1-eps, otherwise
/// one of the 3 (or 15) non-identity Paulis uniformly.
template <class Rng>
std::optional<std::string> sample_gate_fault(GateKind kind, const NoiseParams& params, Rng& rng) {
  const int k = detail::sample_fault_index(gate_arity(kind), fault_probability(kind, params), rng);
  if (k < 0) return std::nullopt;
  return nontrivial_paulis(gate_arity(kind))[static_cast<std::size_t>(k)];
}

template <class Rng>
std::vector<std::size_t> apply_preparation_flips(std::size_t n_qubits, double p_prep, Rng& rng) {
  std::vector<std::size_t> flipped;
  if (p_prep <= 0.0) return flipped;
  std::bernoulli_distribution flip(p_prep);
  for (std::size_t q = 0; q < n_qubits; ++q) {
    if (flip(rng)) flipped.push_back(q);
  }
  return flipped;
}

template <class Rng>
std::string apply_measurement_flips(std::string bits, double p_meas, Rng& rng) {
  if (p_meas <= 0.0) return bits;
  std::bernoulli_distribution flip(p_meas);
  for (char& c : bits) {
    if (flip(rng)) c = c == '0' ? '1' : '0';
  }
  return bits;
}

inline void apply_pauli_string(PureState& state, const GateInstance& gate, std::string_view pauli) {
  if (pauli.size() != gate.arity()) throw std::invalid_argument("Pauli string length must equal gate arity");
  for (std::size_t i = 0; i < pauli.size(); ++i) state.apply_pauli(pauli[i], gate.qubits[i]);
}

/// Inserts RZ(theta) on q1 right after the first Hadamard on q1 (the encoder's
/// Hadamard). The insertion happens even for theta = 0.
inline Circuit insert_coherent_rotation(const Circuit& circuit, double theta) {
  for (std::size_t i = 0; i < circuit.gates.size(); ++i) {
    const auto& g = circuit.gates[i];
    if (g.kind == GateKind::H && g.qubits[0] == 1) {
      Circuit out = circuit;
      out.gates.insert(out.gates.begin() + static_cast<std::ptrdiff_t>(i) + 1, gates::rz(1, theta));
      return out;
    }
  }
  throw std::invalid_argument("circuit has no Hadamard on q1 to attach a coherent rotation to");
}

/// Uniform distribution over all bitstrings of length log2(d).
inline OutcomeDistribution totally_mixed(std::size_t d) {
  if (d < 2 || !std::has_single_bit(d)) throw std::invalid_argument("dimension must be a power of two >= 2");
  const std::size_t width = static_cast<std::size_t>(std::countr_zero(d));
  if (width > kMaxQubits) throw std::invalid_argument("dimension too large");
  OutcomeDistribution out;
  for (std::uint32_t k = 0; k < d; ++k) out.emplace(unpack_bits(k, width), 1.0 / static_cast<double>(d));
  return out;
}

/// (1 - xi) p + xi I/d over the full alphabet of p's bitstring width.
inline OutcomeDistribution depolarize(const OutcomeDistribution& dist, double xi) {
  if (!(xi >= 0.0 && xi <= 1.0)) throw std::invalid_argument("xi must lie in [0,1]");
  if (dist.empty()) throw std::invalid_argument("cannot depolarize an empty distribution");
  const std::size_t width = dist.begin()->first.size();
  OutcomeDistribution out = totally_mixed(std::size_t{1} << width);
  for (auto& [bits, p] : out) {
    auto it = dist.find(bits);
    p = (1.0 - xi) * (it == dist.end() ? 0.0 : it->second) + xi * p;
  }
  return out;
}

/// Clifford gates, plus RZ at integer multiples of pi/2.
inline bool is_clifford(const GateInstance& g) {
  if (g.kind != GateKind::RZ) return true;
  const double k = g.angle / (std::numbers::pi / 2.0);
  return std::abs(k - std::round(k)) < 1e-12;
}

/// Pauli frame over at most 32 qubits: bit q of `x` / `z` marks an X / Z
/// component on qubit q. Phases are dropped.
struct PauliFrame {
  std::uint32_t x = 0;
  std::uint32_t z = 0;

  /// Conjugates the frame through a Clifford gate.
  void propagate(const GateInstance& g) {
    const std::uint32_t a = 1u << g.qubits[0];
    const std::uint32_t b = g.arity() == 2 ? 1u << g.qubits[1] : 0u;
    switch (g.kind) {
      case GateKind::X:
      case GateKind::Y:
      case GateKind::Z:
        break;
      case GateKind::H: {
        const bool xa = x & a, za = z & a;
        x = (x & ~a) | (za ? a : 0u);
        z = (z & ~a) | (xa ? a : 0u);
        break;
      }
      case GateKind::S:
        if (x & a) z ^= a;
        break;
      case GateKind::RZ: {
        const long k = std::lround(g.angle / (std::numbers::pi / 2.0));
        if (((k % 2) + 2) % 2 == 1 && (x & a)) z ^= a;
        break;
      }
      case GateKind::CNOT:
        if (x & a) x ^= b;
        if (z & b) z ^= a;
        break;
      case GateKind::CZ:
        if (x & b) z ^= a;
        if (x & a) z ^= b;
        break;
      case GateKind::SWAP: {
        auto swap_bits = [a, b](std::uint32_t& v) {
          const bool va = v & a, vb = v & b;
          v = (v & ~(a | b)) | (va ? b : 0u) | (vb ? a : 0u);
        };
        swap_bits(x);
        swap_bits(z);
        break;
      }
    }
  }

  void inject(const GateInstance& g, std::string_view pauli) {
    for (std::size_t i = 0; i < pauli.size(); ++i) {
      const std::uint32_t m = 1u << g.qubits[i];
      if (pauli[i] == 'X' || pauli[i] == 'Y') x ^= m;
      if (pauli[i] == 'Z' || pauli[i] == 'Y') z ^= m;
    }
  }
};

enum class Engine { Auto, PauliFrame, StateVector };

struct SimOptions {
  Engine engine = Engine::Auto;
  unsigned jobs = 1;
};

namespace detail {

struct GateNoise {
  double p = 0.0;
  std::vector<PauliFrame> masks;  // one per nontrivial Pauli
};

inline std::vector<GateNoise> gate_noise_table(const Circuit& c, const NoiseParams& params) {
  std::vector<GateNoise> out;
  out.reserve(c.gates.size());
  for (const auto& g : c.gates) {
    GateNoise gn;
    gn.p = fault_probability(g.kind, params);
    for (const auto& pauli : nontrivial_paulis(g.arity())) {
      PauliFrame f;
      f.inject(g, pauli);
      gn.masks.push_back(f);
    }
    out.push_back(std::move(gn));
  }
  return out;
}

template <class Rng>
std::uint32_t flip_readout(std::uint32_t outcome, std::size_t width, double p_meas, Rng& rng) {
  if (p_meas <= 0.0) return outcome;
  std::bernoulli_distribution flip(p_meas);
  for (std::size_t i = 0; i < width; ++i) {
    if (flip(rng)) outcome ^= 1u << i;
  }
  return outcome;
}

}  // namespace detail

/// Monte-Carlo trajectories: preparation flips, each gate followed by a
/// sampled Pauli fault, then readout flips. Shots are processed in fixed
/// blocks with their own engines, so counts depend only on (circuit, params,
/// shots, seed), never on `options.jobs`. With all stochastic parameters zero
/// the result equals sample_counts(ideal_distribution(circuit), shots, seed).
/// `params.theta` and `params.xi` are not applied here.
inline ShotCounts noisy_counts(const Circuit& circuit, const NoiseParams& params, std::uint64_t shots,
                               std::uint64_t seed, SimOptions options = {}) {
  circuit.validate();
  params.validate();
  if (shots == 0) throw std::invalid_argument("shots must be positive");

  const OutcomeDistribution ideal = ideal_distribution(circuit);
  const OutcomeSampler ideal_sampler(ideal);
  const std::size_t width = circuit.measured.size();
  const std::size_t n = circuit.n_qubits;

  bool clifford = true;
  for (const auto& g : circuit.gates) clifford = clifford && is_clifford(g);
  Engine engine = options.engine;
  if (engine == Engine::Auto) engine = clifford ? Engine::PauliFrame : Engine::StateVector;
  if (engine == Engine::PauliFrame && !clifford) {
    throw std::invalid_argument("Pauli-frame engine requires a Clifford circuit");
  }

  const auto noise = detail::gate_noise_table(circuit, params);

  // Ideal prefix states for the statevector engine: a trajectory restarts from
  // the state just before its first noise event.
  std::vector<PureState> prefix;
  if (engine == Engine::StateVector &&
      (circuit.gates.size() + 1) * (std::size_t{1} << n) <= (std::size_t{1} << 22)) {
    PureState s(n);
    prefix.push_back(s);
    for (const auto& g : circuit.gates) {
      s.apply(g);
      prefix.push_back(s);
    }
  }

  auto run_block = [&](std::uint64_t block, std::vector<std::uint64_t>& table) {
    auto outcome_rng = detail::block_engine(seed, block, detail::kOutcomeStream);
    auto noise_rng = detail::block_engine(seed, block, detail::kNoiseStream);
    const std::uint64_t count = std::min(detail::kShotBlock, shots - block * detail::kShotBlock);
    std::vector<PauliFault> events;
    for (std::uint64_t shot = 0; shot < count; ++shot) {
      std::uint32_t outcome = 0;
      if (engine == Engine::PauliFrame) {
        PauliFrame frame;
        for (std::size_t q : apply_preparation_flips(n, params.p_prep, noise_rng)) frame.x ^= 1u << q;
        for (std::size_t gi = 0; gi < circuit.gates.size(); ++gi) {
          frame.propagate(circuit.gates[gi]);
          const int k = detail::sample_fault_index(circuit.gates[gi].arity(), noise[gi].p, noise_rng);
          if (k >= 0) {
            frame.x ^= noise[gi].masks[static_cast<std::size_t>(k)].x;
            frame.z ^= noise[gi].masks[static_cast<std::size_t>(k)].z;
          }
        }
        outcome = ideal_sampler(outcome_rng);
        for (std::size_t i = 0; i < width; ++i) {
          if ((frame.x >> circuit.measured[i]) & 1u) outcome ^= 1u << i;
        }
      } else {
        const auto flips = apply_preparation_flips(n, params.p_prep, noise_rng);
        events.clear();
        for (std::size_t gi = 0; gi < circuit.gates.size(); ++gi) {
          const int k = detail::sample_fault_index(circuit.gates[gi].arity(), noise[gi].p, noise_rng);
          if (k >= 0) {
            events.push_back({gi, nontrivial_paulis(circuit.gates[gi].arity())[static_cast<std::size_t>(k)]});
          }
        }
        if (flips.empty() && events.empty()) {
          outcome = ideal_sampler(outcome_rng);
        } else {
          std::size_t start = 0;
          PureState st(n);
          if (flips.empty() && !prefix.empty()) {
            start = events.front().gate_index;
            st = prefix[start];
          }
          for (std::size_t q : flips) st.apply_pauli('X', q);
          std::size_t next = 0;
          while (next < events.size() && events[next].gate_index < start) ++next;
          for (std::size_t gi = start; gi < circuit.gates.size(); ++gi) {
            st.apply(circuit.gates[gi]);
            while (next < events.size() && events[next].gate_index == gi) {
              apply_pauli_string(st, circuit.gates[gi], events[next].pauli);
              ++next;
            }
          }
          outcome = OutcomeSampler(measure_distribution(st, circuit.measured))(outcome_rng);
        }
      }
      outcome = detail::flip_readout(outcome, width, params.p_meas, noise_rng);
      ++table[outcome];
    }
  };

  const std::uint64_t n_blocks = (shots + detail::kShotBlock - 1) / detail::kShotBlock;
  const unsigned workers = static_cast<unsigned>(
      std::max<std::uint64_t>(1, std::min<std::uint64_t>(options.jobs == 0 ? 1 : options.jobs, n_blocks)));
  std::vector<std::vector<std::uint64_t>> tables(workers, std::vector<std::uint64_t>(std::size_t{1} << width, 0));
  std::atomic<std::uint64_t> next_block{0};
  auto worker = [&](unsigned w) {
    for (std::uint64_t b = next_block++; b < n_blocks; b = next_block++) run_block(b, tables[w]);
  };
  if (workers == 1) {
    worker(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker, w);
  }
  for (unsigned w = 1; w < workers; ++w) {
    for (std::size_t k = 0; k < tables[0].size(); ++k) tables[0][k] += tables[w][k];
  }
  return detail::counts_from_table(tables[0], width);
}

}  // namespace q422
