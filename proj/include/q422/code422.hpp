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

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "q422/sim.hpp"

/// The [4,2,2] error-detecting code: two logical qubits Q0 Q1 on four data
/// qubits q0..q3. Logical basis states are
///
///   |00> -> (|0000> + |1111>)/sqrt2     |01> -> (|1100> + |0011>)/sqrt2
///   |10> -> (|1010> + |0101>)/sqrt2     |11> -> (|0110> + |1001>)/sqrt2
///
/// Any odd-parity readout of q0..q3 signals an error and is discarded.
namespace q422 {

inline constexpr std::size_t kDataQubits = 4;
inline constexpr std::size_t kAncillaQubit = 4;

enum class LogicalState { L00, L01, L10, L11, L0Plus, LPhiPlus };

enum class LogicalGate {
  X0,
  X1,
  Z0,
  Z1,
  CZZZ,    // cz(0,1) followed by Z0 Z1
  HHSWAP,  // H0 H1 followed by SWAP(0,1)
};

enum class EncoderVariant { NonFaultTolerant, AncillaChecked };

enum class LogicalValue { V00, V01, V10, V11 };

enum class GateSetId { Reduced, Full, SingleHHSWAP };

inline constexpr std::array kAllLogicalGates{LogicalGate::X0, LogicalGate::X1,   LogicalGate::Z0,
                                             LogicalGate::Z1, LogicalGate::CZZZ, LogicalGate::HHSWAP};

inline constexpr std::string_view to_string(LogicalState s) {
  switch (s) {
    case LogicalState::L00: return "L00";
    case LogicalState::L01: return "L01";
    case LogicalState::L10: return "L10";
    case LogicalState::L11: return "L11";
    case LogicalState::L0Plus: return "L0plus";
    case LogicalState::LPhiPlus: return "LPhiPlus";
  }
  return "?";
}

inline constexpr std::string_view to_string(LogicalGate g) {
  switch (g) {
    case LogicalGate::X0: return "X0";
    case LogicalGate::X1: return "X1";
    case LogicalGate::Z0: return "Z0";
    case LogicalGate::Z1: return "Z1";
    case LogicalGate::CZZZ: return "CZZZ";
    case LogicalGate::HHSWAP: return "HHSWAP";
  }
  return "?";
}

inline constexpr std::string_view to_string(EncoderVariant v) {
  return v == EncoderVariant::NonFaultTolerant ? "nonft" : "ancilla";
}

inline constexpr std::string_view to_string(LogicalValue v) {
  switch (v) {
    case LogicalValue::V00: return "00";
    case LogicalValue::V01: return "01";
    case LogicalValue::V10: return "10";
    case LogicalValue::V11: return "11";
  }
  return "?";
}

inline constexpr std::string_view to_string(GateSetId id) {
  switch (id) {
    case GateSetId::Reduced: return "reduced";
    case GateSetId::Full: return "full";
    case GateSetId::SingleHHSWAP: return "hhswap";
  }
  return "?";
}

inline std::optional<LogicalState> logical_state_from_string(std::string_view s) {
  for (auto v : {LogicalState::L00, LogicalState::L01, LogicalState::L10, LogicalState::L11,
                 LogicalState::L0Plus, LogicalState::LPhiPlus}) {
    if (to_string(v) == s) return v;
  }
  return std::nullopt;
}

inline std::optional<LogicalGate> logical_gate_from_string(std::string_view s) {
  for (auto g : kAllLogicalGates) {
    if (to_string(g) == s) return g;
  }
  return std::nullopt;
}

inline std::optional<EncoderVariant> encoder_variant_from_string(std::string_view s) {
  if (s == "nonft") return EncoderVariant::NonFaultTolerant;
  if (s == "ancilla") return EncoderVariant::AncillaChecked;
  return std::nullopt;
}

inline std::optional<GateSetId> gate_set_from_string(std::string_view s) {
  for (auto id : {GateSetId::Reduced, GateSetId::Full, GateSetId::SingleHHSWAP}) {
    if (to_string(id) == s) return id;
  }
  return std::nullopt;
}

inline std::vector<LogicalGate> gate_set_members(GateSetId id) {
  switch (id) {
    case GateSetId::Reduced:
      return {LogicalGate::X0, LogicalGate::X1, LogicalGate::Z0, LogicalGate::Z1, LogicalGate::CZZZ};
    case GateSetId::Full:
      return {kAllLogicalGates.begin(), kAllLogicalGates.end()};
    case GateSetId::SingleHHSWAP:
      return {LogicalGate::HHSWAP};
  }
  return {};
}

inline bool even_parity(std::string_view bits) {
  std::size_t ones = 0;
  for (char c : bits) ones += (c == '1');
  return ones % 2 == 0;
}

inline OutcomeDistribution codeword_distribution(LogicalState label) {
  switch (label) {
    case LogicalState::L00: return {{"0000", 0.5}, {"1111", 0.5}};
    case LogicalState::L01: return {{"1100", 0.5}, {"0011", 0.5}};
    case LogicalState::L10: return {{"1010", 0.5}, {"0101", 0.5}};
    case LogicalState::L11: return {{"0110", 0.5}, {"1001", 0.5}};
    case LogicalState::L0Plus: return {{"0000", 0.25}, {"1111", 0.25}, {"1100", 0.25}, {"0011", 0.25}};
    case LogicalState::LPhiPlus: return {{"0000", 0.25}, {"1111", 0.25}, {"0110", 0.25}, {"1001", 0.25}};
  }
  return {};
}

/// Physical gates on q0..q3 implementing `gate` on the encoded pair.
inline std::vector<GateInstance> coded_gate_circuit(LogicalGate gate) {
  using namespace gates;
  switch (gate) {
    case LogicalGate::X0: return {x(0), x(2)};
    case LogicalGate::X1: return {x(0), x(1)};
    case LogicalGate::Z0: return {z(0), z(1)};
    case LogicalGate::Z1: return {z(0), z(2)};
    case LogicalGate::CZZZ: return {s(0), s(1), s(2), s(3)};
    case LogicalGate::HHSWAP: return {h(0), h(1), h(2), h(3)};
  }
  return {};
}

/// Bare logical cz(0,1), without the trailing Z0 Z1. Not part of any gate set.
inline std::vector<GateInstance> coded_cz_only() {
  using namespace gates;
  return {s(0), s(1), s(2), s(3), z(1), z(2)};
}

/// Physical gates on the unencoded pair Q0,Q1. SWAP is always expanded into
/// three CNOTs so two-qubit gate counts reflect the hardware circuit.
inline std::vector<GateInstance> uncoded_gate_circuit(LogicalGate gate) {
  using namespace gates;
  switch (gate) {
    case LogicalGate::X0: return {x(0)};
    case LogicalGate::X1: return {x(1)};
    case LogicalGate::Z0: return {z(0)};
    case LogicalGate::Z1: return {z(1)};
    case LogicalGate::CZZZ: return {cz(0, 1), z(0), z(1)};
    case LogicalGate::HHSWAP: return {h(0), h(1), cnot(0, 1), cnot(1, 0), cnot(0, 1)};
  }
  return {};
}

/// Encoder circuit for `label`. Data qubits q0..q3 are measured in order; the
/// ancilla-checked variant appends a (q0,q3) parity check onto q4 and
/// measures it last.
inline Circuit build_encoder(LogicalState label, EncoderVariant variant) {
  using namespace gates;
  if (variant == EncoderVariant::AncillaChecked && label != LogicalState::L00) {
    throw std::invalid_argument("ancilla-checked encoder is only defined for L00");
  }
  if (variant == EncoderVariant::AncillaChecked) {
    Circuit c(5, {h(1), cnot(1, 0), cnot(1, 2), cnot(2, 3), cnot(0, 4), cnot(3, 4)});
    return c.measure_all();
  }
  Circuit c(kDataQubits);
  switch (label) {
    case LogicalState::L00:
    case LogicalState::L01:
    case LogicalState::L10:
    case LogicalState::L11:
      c.gates = {h(1), cnot(1, 0), cnot(1, 2), cnot(2, 3)};
      if (label == LogicalState::L01 || label == LogicalState::L11) c.add(coded_gate_circuit(LogicalGate::X1));
      if (label == LogicalState::L10 || label == LogicalState::L11) c.add(coded_gate_circuit(LogicalGate::X0));
      break;
    case LogicalState::L0Plus:
      // Bell pairs on (q0,q1) and (q2,q3).
      c.gates = {h(0), cnot(0, 1), h(2), cnot(2, 3)};
      break;
    case LogicalState::LPhiPlus:
      // Bell pairs on (q0,q3) and (q1,q2).
      c.gates = {h(0), cnot(0, 3), h(1), cnot(1, 2)};
      break;
  }
  return c.measure_all();
}

/// Decodes a 4-bit data readout; nullopt for odd parity. With `virtual_swap`
/// the roles of q0 and q1 are exchanged before decoding.
inline std::optional<LogicalValue> decode(std::string_view bits, bool virtual_swap = false) {
  if (bits.size() != kDataQubits) {
    throw std::invalid_argument("decode expects a 4-bit string, got '" + std::string(bits) + "'");
  }
  std::string b(bits);
  pack_bits(b);  // validates characters
  if (virtual_swap) std::swap(b[0], b[1]);
  if (!even_parity(b)) return std::nullopt;
  // On even-parity words Q0 = q0^q1 and Q1 = q0^q2.
  const bool q0 = b[0] == '1', q1 = b[1] == '1', q2 = b[2] == '1';
  const bool logical0 = q0 != q1;
  const bool logical1 = q0 != q2;
  if (logical0) return logical1 ? LogicalValue::V11 : LogicalValue::V10;
  return logical1 ? LogicalValue::V01 : LogicalValue::V00;
}

struct PostSelectionResult {
  ShotCounts retained;  // data bits only (ancilla stripped)
  std::uint64_t gamma = 0;
  std::uint64_t total = 0;
  double r = 0.0;
  std::uint64_t ancilla_rejections = 0;
};

/// Keeps even-parity data readouts. With `ancilla_present`, strings are 5 bits
/// with the ancilla last; an ancilla value of 1 also rejects the shot.
inline PostSelectionResult post_select(const ShotCounts& raw, bool ancilla_present) {
  const std::size_t width = kDataQubits + (ancilla_present ? 1 : 0);
  PostSelectionResult out;
  out.total = raw.total;
  for (const auto& [bits, n] : raw.counts) {
    if (bits.size() != width) {
      throw std::invalid_argument("post_select expects " + std::to_string(width) + "-bit strings, got '" +
                                  bits + "'");
    }
    const std::string data = bits.substr(0, kDataQubits);
    if (!even_parity(data)) continue;
    if (ancilla_present && bits[kDataQubits] == '1') {
      out.ancilla_rejections += n;
      continue;
    }
    out.retained.add(data, n);
  }
  out.gamma = out.retained.total;
  out.r = out.total == 0 ? 0.0 : static_cast<double>(out.gamma) / static_cast<double>(out.total);
  return out;
}

/// Exact counterpart of post_select on a distribution: the retained,
/// renormalised distribution and the retained mass.
struct PostSelectedDistribution {
  OutcomeDistribution retained;
  double r = 0.0;
};

inline PostSelectedDistribution post_select(const OutcomeDistribution& dist, bool ancilla_present) {
  PostSelectedDistribution out;
  for (const auto& [bits, p] : dist) {
    const std::string data = bits.substr(0, kDataQubits);
    if (!even_parity(data)) continue;
    if (ancilla_present && bits.size() > kDataQubits && bits[kDataQubits] == '1') continue;
    out.retained[data] += p;
    out.r += p;
  }
  if (out.r > 0.0) {
    for (auto& [bits, p] : out.retained) p /= out.r;
  }
  return out;
}

/// Aggregates a 4-bit distribution onto the four logical values, discarding
/// odd-parity mass and renormalising. Keys are "00".."11".
inline OutcomeDistribution decode_distribution(const OutcomeDistribution& dist, bool virtual_swap = false) {
  OutcomeDistribution out;
  double kept = 0.0;
  for (const auto& [bits, p] : dist) {
    if (auto v = decode(bits, virtual_swap)) {
      out[std::string(to_string(*v))] += p;
      kept += p;
    }
  }
  if (kept > 0.0) {
    for (auto& [k, p] : out) p /= kept;
  }
  return out;
}

}  // namespace q422
