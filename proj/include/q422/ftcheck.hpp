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
#include <atomic>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "q422/analytics.hpp"
#include "q422/code422.hpp"
#include "q422/noise.hpp"
#include "q422/sim.hpp"

/// Exhaustive single-fault injection. Every non-identity Pauli after every
/// gate is propagated exactly and its effect on the measured distribution is
/// classified against the detection scheme. Since the [4,2,2] code only
/// detects, any change that survives detection counts as a logical error.
namespace q422 {

enum class Detection {
  PostSelect,         // all measured bits are data; keep even parity
  PostSelectAncilla,  // last measured bit is an ancilla flag; keep even data parity and ancilla 0
};

inline constexpr std::string_view to_string(Detection d) {
  return d == Detection::PostSelect ? "postselect" : "postselect+ancilla";
}

enum class FaultClassification { Harmless, DetectedPostSelection, DetectedAncilla, UndetectedLogicalError };

inline constexpr std::string_view to_string(FaultClassification c) {
  switch (c) {
    case FaultClassification::Harmless: return "Harmless";
    case FaultClassification::DetectedPostSelection: return "DetectedPostSelection";
    case FaultClassification::DetectedAncilla: return "DetectedAncilla";
    case FaultClassification::UndetectedLogicalError: return "UndetectedLogicalError";
  }
  return "?";
}

struct FaultSite {
  enum class Kind { Gate, Preparation };

  Kind kind = Kind::Gate;
  std::size_t index = 0;  // gate index, or qubit for a preparation site
  std::string pauli;      // one letter per gate target; "X" for preparation sites

  friend bool operator==(const FaultSite&, const FaultSite&) = default;
};

/// 3 sites per single-qubit gate and 15 per two-qubit gate, in gate order.
/// With `include_preparation`, one X site per qubit is prepended.
inline std::vector<FaultSite> enumerate_single_faults(const Circuit& circuit, bool include_preparation = false) {
  std::vector<FaultSite> sites;
  if (include_preparation) {
    for (std::size_t q = 0; q < circuit.n_qubits; ++q) sites.push_back({FaultSite::Kind::Preparation, q, "X"});
  }
  for (std::size_t i = 0; i < circuit.gates.size(); ++i) {
    for (const auto& p : nontrivial_paulis(circuit.gates[i].arity())) sites.push_back({FaultSite::Kind::Gate, i, p});
  }
  return sites;
}

namespace detail {

inline constexpr double kDistributionTolerance = 1e-9;

inline PureState run_with_faults(const Circuit& circuit, std::span<const FaultSite> faults) {
  PureState st(circuit.n_qubits);
  for (const auto& f : faults) {
    if (f.kind == FaultSite::Kind::Preparation) st.apply_pauli('X', f.index);
  }
  for (std::size_t i = 0; i < circuit.gates.size(); ++i) {
    st.apply(circuit.gates[i]);
    for (const auto& f : faults) {
      if (f.kind == FaultSite::Kind::Gate && f.index == i) apply_pauli_string(st, circuit.gates[i], f.pauli);
    }
  }
  return st;
}

struct Selected {
  OutcomeDistribution retained;
  double mass = 0.0;
};

template <class Accept>
Selected select(const OutcomeDistribution& dist, Accept accept) {
  Selected out;
  for (const auto& [bits, p] : dist) {
    if (accept(bits)) {
      out.retained[bits] = p;
      out.mass += p;
    }
  }
  if (out.mass > 0.0) {
    for (auto& [bits, p] : out.retained) p /= out.mass;
  }
  return out;
}

}  // namespace detail

/// Classifies the joint effect of `faults` (normally a single site).
inline FaultClassification classify_faults(const Circuit& circuit, std::span<const FaultSite> faults,
                                           Detection detection) {
  circuit.validate();
  const bool ancilla = detection == Detection::PostSelectAncilla;
  if (ancilla && circuit.measured.size() < 2) {
    throw std::invalid_argument("ancilla detection needs at least one data bit and the ancilla bit");
  }
  const auto ideal = ideal_distribution(circuit);
  const auto faulty = measure_distribution(detail::run_with_faults(circuit, faults), circuit.measured);
  if (trace_distance(ideal, faulty) < detail::kDistributionTolerance) return FaultClassification::Harmless;

  auto parity_ok = [ancilla](const std::string& bits) {
    return even_parity(ancilla ? std::string_view(bits).substr(0, bits.size() - 1) : std::string_view(bits));
  };
  auto full_ok = [&](const std::string& bits) { return parity_ok(bits) && (!ancilla || bits.back() == '0'); };

  const auto f_full = detail::select(faulty, full_ok);
  if (f_full.mass > 0.0 &&
      trace_distance(f_full.retained, detail::select(ideal, full_ok).retained) >= detail::kDistributionTolerance) {
    return FaultClassification::UndetectedLogicalError;
  }
  if (!ancilla) return FaultClassification::DetectedPostSelection;
  const auto f_parity = detail::select(faulty, parity_ok);
  const bool parity_alone_suffices =
      f_parity.mass == 0.0 ||
      trace_distance(f_parity.retained, detail::select(ideal, parity_ok).retained) < detail::kDistributionTolerance;
  return parity_alone_suffices ? FaultClassification::DetectedPostSelection : FaultClassification::DetectedAncilla;
}

inline FaultClassification classify_fault(const Circuit& circuit, const FaultSite& site, Detection detection) {
  return classify_faults(circuit, std::span<const FaultSite>(&site, 1), detection);
}

/// Undetected sites, counted by the probability unit each carries:
/// eps1/3 per single-qubit site, eps2/15 per two-qubit site, P_p per
/// preparation site.
struct UndetectedWeight {
  std::size_t single_qubit_sites = 0;
  std::size_t two_qubit_sites = 0;
  std::size_t preparation_sites = 0;

  double evaluate(double eps1, double eps2, double p_prep = 0.0) const {
    return static_cast<double>(single_qubit_sites) * eps1 / 3.0 +
           static_cast<double>(two_qubit_sites) * eps2 / 15.0 + static_cast<double>(preparation_sites) * p_prep;
  }
};

struct ClassifiedSite {
  FaultSite site;
  FaultClassification classification = FaultClassification::Harmless;
};

struct FTReport {
  std::string circuit_id;
  Detection detection = Detection::PostSelect;
  std::vector<ClassifiedSite> sites;
  bool fault_tolerant = true;
  UndetectedWeight undetected;

  std::size_t count(FaultClassification c) const {
    return static_cast<std::size_t>(
        std::count_if(sites.begin(), sites.end(), [c](const ClassifiedSite& s) { return s.classification == c; }));
  }
};

/// Classifies every single-fault site. Fault tolerant iff no site is an
/// undetected logical error.
inline FTReport verify_single_fault_tolerance(const Circuit& circuit, Detection detection, std::string circuit_id = "",
                                   bool include_preparation = false, unsigned jobs = 1) {
  FTReport report;
  report.circuit_id = std::move(circuit_id);
  report.detection = detection;
  const auto sites = enumerate_single_faults(circuit, include_preparation);
  report.sites.resize(sites.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < sites.size(); i = next++) {
      report.sites[i] = {sites[i], classify_fault(circuit, sites[i], detection)};
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(sites.size())));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  for (const auto& s : report.sites) {
    if (s.classification != FaultClassification::UndetectedLogicalError) continue;
    report.fault_tolerant = false;
    if (s.site.kind == FaultSite::Kind::Preparation) {
      ++report.undetected.preparation_sites;
    } else if (circuit.gates[s.site.index].arity() == 2) {
      ++report.undetected.two_qubit_sites;
    } else {
      ++report.undetected.single_qubit_sites;
    }
  }
  return report;
}

/// Number of fault pairs on distinct locations that produce an undetected
/// logical error. Informational only; not part of the verdict.
inline std::size_t count_undetected_fault_pairs(const Circuit& circuit, Detection detection) {
  const auto sites = enumerate_single_faults(circuit);
  std::size_t n = 0;
  for (std::size_t i = 0; i < sites.size(); ++i) {
    for (std::size_t j = i + 1; j < sites.size(); ++j) {
      if (sites[i].index == sites[j].index) continue;
      const FaultSite pair[2] = {sites[i], sites[j]};
      if (classify_faults(circuit, pair, detection) == FaultClassification::UndetectedLogicalError) ++n;
    }
  }
  return n;
}

}  // namespace q422
