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
#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <map>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "q422/analytics.hpp"
#include "q422/code422.hpp"
#include "q422/noise.hpp"
#include "q422/sim.hpp"

/// Paired uncoded/coded runs of random logical-gate sequences, scored by
/// trace distance against the noiseless simulation.
namespace q422 {

inline constexpr std::uint64_t kMaxSequenceLength = 1000;
inline constexpr std::uint64_t kDefaultShots = 8192;

struct SequenceSpec {
  GateSetId gate_set = GateSetId::Reduced;
  std::uint64_t length = 1;
  std::uint64_t seed = 0;

  void validate() const {
    if (length < 1 || length > kMaxSequenceLength) {
      throw std::invalid_argument("sequence length must be in [1, " + std::to_string(kMaxSequenceLength) + "]");
    }
  }
};

namespace detail {

/// Mixes a seed with extra words into a new 64-bit seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(a),    static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b),    static_cast<std::uint32_t>(b >> 32)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

}  // namespace detail

/// Uniform i.i.d. draw from the gate set, seeded by (seed, length) so every
/// length gets an independent sequence.
inline std::vector<LogicalGate> random_sequence(const SequenceSpec& spec) {
  spec.validate();
  const auto members = gate_set_members(spec.gate_set);
  std::mt19937_64 rng(detail::derive_seed(spec.seed, spec.length, 0x5e9));
  std::uniform_int_distribution<std::size_t> pick(0, members.size() - 1);
  std::vector<LogicalGate> seq(spec.length);
  for (auto& g : seq) g = members[pick(rng)];
  return seq;
}

struct CircuitPair {
  Circuit uncoded;
  Circuit coded;
};

/// Uncoded: the logical gates on two qubits, both measured. Coded: the
/// non-fault-tolerant |00> encoder followed by the coded gate blocks, q0..q3
/// measured. Gates are never simplified or cancelled.
inline CircuitPair build_pair(std::span<const LogicalGate> sequence) {
  CircuitPair pair{Circuit(2), build_encoder(LogicalState::L00, EncoderVariant::NonFaultTolerant)};
  for (LogicalGate g : sequence) {
    pair.uncoded.add(uncoded_gate_circuit(g));
    pair.coded.add(coded_gate_circuit(g));
  }
  pair.uncoded.measure_all();
  return pair;
}

/// Support size of an (already pruned) ideal distribution.
inline std::size_t output_dimension(const OutcomeDistribution& ideal) {
  std::size_t n = 0;
  for (const auto& [bits, p] : ideal) n += p >= kPruneThreshold;
  if (n == 0) throw std::invalid_argument("ideal distribution has empty support");
  return n;
}

struct ExperimentRecord {
  std::string experiment_id;
  GateSetId gate_set = GateSetId::Reduced;
  std::uint64_t length = 0;
  std::uint64_t seed = 0;
  Scheme scheme = Scheme::Uncoded;
  std::uint64_t shots = 0;
  std::uint64_t gamma = 0;
  double r = 1.0;
  double d = 0.0;
  double d_decoded = 0.0;
  std::uint64_t output_dimension = 1;
  NoiseParams params;
  std::string timestamp;

  friend bool operator==(const ExperimentRecord&, const ExperimentRecord&) = default;
};

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct RunOptions {
  /// Replace sampling by the exact ideal distribution; only xi then acts.
  bool analytic_xi = false;
  SimOptions sim;
};

struct PairResult {
  ExperimentRecord uncoded;
  ExperimentRecord coded_raw;
  ExperimentRecord coded_ps;

  /// Small-experiment criterion: post-selected coded error below uncoded.
  bool fault_tolerant() const { return coded_ps.d < uncoded.d; }
};

namespace detail {

struct Observed {
  OutcomeDistribution dist;  // experimental distribution after xi mixing
  ShotCounts counts;         // empty in analytic mode
};

/// Logical readout with no parity check: Q0 = q0^q1, Q1 = q0^q2 on every string.
inline OutcomeDistribution decode_unchecked(const OutcomeDistribution& dist) {
  OutcomeDistribution out;
  for (const auto& [bits, p] : dist) {
    std::string key(2, '0');
    key[0] = (bits[0] != bits[1]) ? '1' : '0';
    key[1] = (bits[0] != bits[2]) ? '1' : '0';
    out[key] += p;
  }
  return out;
}

inline Observed observe(const Circuit& c, const OutcomeDistribution& ideal, const NoiseParams& params,
                        std::uint64_t shots, std::uint64_t seed, const RunOptions& opts) {
  Observed o;
  if (opts.analytic_xi) {
    o.dist = ideal;
  } else {
    o.counts = noisy_counts(c, params, shots, seed, opts.sim);
    o.dist = o.counts.frequencies();
  }
  if (params.xi > 0.0) o.dist = depolarize(o.dist, params.xi);
  return o;
}

}  // namespace detail

/// Runs one prepared pair. Uncoded error is over the 4 outcomes of Q0 Q1; coded
/// error is over the 16 outcomes of q0..q3, raw and after post-selection
/// (renormalised by r). `d_decoded` compares the decoded logical
/// distribution with the uncoded ideal; the raw record decodes every string
/// without a parity check. When nothing survives post-selection
/// the coded_ps error is reported as 1.
inline PairResult run_circuit_pair(const CircuitPair& pair, const NoiseParams& params, std::uint64_t shots,
                                   std::uint64_t seed, const RunOptions& opts = {}) {
  params.validate();
  if (shots == 0) throw std::invalid_argument("shots must be positive");
  if (opts.analytic_xi && !params.stochastic_free()) {
    throw std::invalid_argument("analytic xi mode does not combine with eps1/eps2/p_meas/p_prep");
  }
  if (pair.coded.measured.size() != kDataQubits) throw std::invalid_argument("coded circuit must measure 4 data qubits");

  const auto ideal_u = ideal_distribution(pair.uncoded);
  const auto ideal_c = ideal_distribution(pair.coded);
  const auto dim = static_cast<std::uint64_t>(output_dimension(ideal_u));

  ExperimentRecord base;
  base.shots = shots;
  base.output_dimension = dim;
  base.params = params;
  base.timestamp = utc_timestamp();

  PairResult out;
  const auto obs_u = detail::observe(pair.uncoded, ideal_u, params, shots, detail::derive_seed(seed, 0), opts);
  out.uncoded = base;
  out.uncoded.scheme = Scheme::Uncoded;
  out.uncoded.gamma = shots;
  out.uncoded.d = trace_distance(obs_u.dist, ideal_u);
  out.uncoded.d_decoded = out.uncoded.d;

  const auto obs_c = detail::observe(pair.coded, ideal_c, params, shots, detail::derive_seed(seed, 1), opts);
  out.coded_raw = base;
  out.coded_raw.scheme = Scheme::CodedRaw;
  out.coded_raw.gamma = shots;
  out.coded_raw.d = trace_distance(obs_c.dist, ideal_c);
  out.coded_raw.d_decoded = trace_distance(detail::decode_unchecked(obs_c.dist), ideal_u);

  const auto ps = post_select(obs_c.dist, false);
  out.coded_ps = base;
  out.coded_ps.scheme = Scheme::CodedPS;
  if (!opts.analytic_xi && params.xi == 0.0) {
    const auto counted = post_select(obs_c.counts, false);
    out.coded_ps.gamma = counted.gamma;
    out.coded_ps.r = counted.r;
  } else {
    out.coded_ps.r = ps.r;
    out.coded_ps.gamma = static_cast<std::uint64_t>(std::llround(ps.r * static_cast<double>(shots)));
  }
  if (ps.r > 0.0) {
    out.coded_ps.d = trace_distance(ps.retained, ideal_c);
    out.coded_ps.d_decoded = trace_distance(decode_distribution(ps.retained), ideal_u);
  } else {
    out.coded_ps.d = 1.0;
    out.coded_ps.d_decoded = 1.0;
  }
  return out;
}

inline PairResult run_pair(std::span<const LogicalGate> sequence, const NoiseParams& params, std::uint64_t shots,
                           std::uint64_t seed, const RunOptions& opts = {}) {
  auto res = run_circuit_pair(build_pair(sequence), params, shots, seed, opts);
  for (auto* r : {&res.uncoded, &res.coded_raw, &res.coded_ps}) {
    r->length = sequence.size();
    r->seed = seed;
  }
  return res;
}

namespace detail {

inline void stamp(PairResult& res, const SequenceSpec& spec, const std::string& id) {
  for (auto* r : {&res.uncoded, &res.coded_raw, &res.coded_ps}) {
    r->experiment_id = id;
    r->gate_set = spec.gate_set;
    r->length = spec.length;
    r->seed = spec.seed;
  }
}

inline std::string experiment_id(const SequenceSpec& spec) {
  return std::string(to_string(spec.gate_set)) + "-L" + std::to_string(spec.length) + "-s" +
         std::to_string(spec.seed);
}

/// Runs `n` independent tasks on up to `jobs` threads; results land in slot order.
template <class F>
void parallel_for(std::size_t n, unsigned jobs, F&& f) {
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) f(i);
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(n)));
  if (workers <= 1) {
    worker();
    return;
  }
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
}

}  // namespace detail

/// Runs `seeds_per_length` sequences at every length. Sequence seeds are
/// base_seed, base_seed+1, ...; noise seeds are derived from (seed, L).
/// Records come back ordered by (L, seed, scheme) whatever `opts.sim.jobs` is.
inline std::vector<ExperimentRecord> sweep_lengths(GateSetId gate_set, std::span<const std::uint64_t> lengths,
                                                   const NoiseParams& params, std::uint64_t shots,
                                                   std::uint64_t seeds_per_length, std::uint64_t base_seed = 0,
                                                   const RunOptions& opts = {}) {
  std::vector<SequenceSpec> specs;
  for (std::uint64_t L : lengths) {
    for (std::uint64_t s = 0; s < seeds_per_length; ++s) specs.push_back({gate_set, L, base_seed + s});
  }
  for (const auto& s : specs) s.validate();
  std::vector<PairResult> results(specs.size());
  RunOptions inner = opts;
  inner.sim.jobs = 1;
  detail::parallel_for(specs.size(), opts.sim.jobs, [&](std::size_t i) {
    const auto seq = random_sequence(specs[i]);
    results[i] = run_pair(seq, params, shots, detail::derive_seed(specs[i].seed, specs[i].length), inner);
    detail::stamp(results[i], specs[i], detail::experiment_id(specs[i]));
  });
  std::vector<ExperimentRecord> out;
  out.reserve(results.size() * 3);
  for (auto& r : results) {
    out.push_back(std::move(r.uncoded));
    out.push_back(std::move(r.coded_raw));
    out.push_back(std::move(r.coded_ps));
  }
  return out;
}

/// Coherent-rotation sweep: for each theta the coded circuit gets RZ(theta)
/// after its encoder Hadamard; the uncoded circuit is unchanged. Seeds match
/// sweep_lengths, so theta = 0 reproduces the corresponding sweep point.
inline std::vector<ExperimentRecord> sweep_theta(std::span<const double> thetas, GateSetId gate_set,
                                                 std::uint64_t length, const NoiseParams& params, std::uint64_t shots,
                                                 std::uint64_t seed, const RunOptions& opts = {}) {
  const SequenceSpec spec{gate_set, length, seed};
  const auto seq = random_sequence(spec);
  const CircuitPair plain = build_pair(seq);
  std::vector<PairResult> results(thetas.size());
  RunOptions inner = opts;
  inner.sim.jobs = 1;
  detail::parallel_for(thetas.size(), opts.sim.jobs, [&](std::size_t i) {
    CircuitPair pair{plain.uncoded, insert_coherent_rotation(plain.coded, thetas[i])};
    NoiseParams p = params;
    p.theta = thetas[i];
    results[i] = run_circuit_pair(pair, p, shots, detail::derive_seed(seed, length), inner);
    detail::stamp(results[i], spec, detail::experiment_id(spec) + "-t" + detail::format_double(thetas[i]));
  });
  std::vector<ExperimentRecord> out;
  for (auto& r : results) {
    out.push_back(std::move(r.uncoded));
    out.push_back(std::move(r.coded_raw));
    out.push_back(std::move(r.coded_ps));
  }
  return out;
}

struct SummaryCell {
  std::size_t count = 0;
  double mean_d = 0.0;
  double stderr_d = 0.0;  // standard error of the mean over records
  double mean_r = 0.0;
};

/// Mean D per (L, scheme).
inline std::map<std::pair<std::uint64_t, Scheme>, SummaryCell> summarize(std::span<const ExperimentRecord> records) {
  std::map<std::pair<std::uint64_t, Scheme>, std::vector<const ExperimentRecord*>> groups;
  for (const auto& r : records) groups[{r.length, r.scheme}].push_back(&r);
  std::map<std::pair<std::uint64_t, Scheme>, SummaryCell> out;
  for (const auto& [key, rs] : groups) {
    SummaryCell c;
    c.count = rs.size();
    for (const auto* r : rs) {
      c.mean_d += r->d;
      c.mean_r += r->r;
    }
    c.mean_d /= static_cast<double>(c.count);
    c.mean_r /= static_cast<double>(c.count);
    if (c.count > 1) {
      double ss = 0.0;
      for (const auto* r : rs) ss += (r->d - c.mean_d) * (r->d - c.mean_d);
      c.stderr_d = std::sqrt(ss / static_cast<double>(c.count - 1) / static_cast<double>(c.count));
    }
    out[key] = c;
  }
  return out;
}

/// Undirected two-qubit connectivity of a device.
struct CouplingMap {
  std::size_t n_qubits = 0;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;

  static CouplingMap linear(std::size_t n) {
    CouplingMap m{n, {}};
    for (std::size_t q = 0; q + 1 < n; ++q) m.pairs.emplace_back(q, q + 1);
    return m;
  }

  void validate() const {
    for (const auto& [a, b] : pairs) {
      if (a >= n_qubits || b >= n_qubits) throw std::out_of_range("coupling pair references a missing qubit");
      if (a == b) throw std::invalid_argument("coupling pair connects a qubit to itself");
    }
  }

  bool allows(std::size_t a, std::size_t b) const {
    for (const auto& [x, y] : pairs) {
      if ((x == a && y == b) || (x == b && y == a)) return true;
    }
    return false;
  }
};

struct CouplingViolation {
  std::size_t gate_index = 0;
  std::size_t a = 0, b = 0;
};

inline std::vector<CouplingViolation> validate_coupling(const Circuit& circuit, const CouplingMap& map) {
  map.validate();
  std::vector<CouplingViolation> out;
  for (std::size_t i = 0; i < circuit.gates.size(); ++i) {
    const auto& g = circuit.gates[i];
    if (g.arity() != 2) continue;
    if (g.qubits[0] >= map.n_qubits || g.qubits[1] >= map.n_qubits || !map.allows(g.qubits[0], g.qubits[1])) {
      out.push_back({i, g.qubits[0], g.qubits[1]});
    }
  }
  return out;
}

}  // namespace q422
