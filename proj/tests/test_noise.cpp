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


#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracle.hpp"
#include "q422/code422.hpp"
#include "q422/noise.hpp"

using namespace q422;

namespace {

double sigma(double p, double n) { return std::sqrt(p * (1.0 - p) / n); }

Circuit encoder() { return build_encoder(LogicalState::L00, EncoderVariant::NonFaultTolerant); }

// Exact probability, over all fault combinations on the gates, that the
// readout passes `accept` and decodes to something other than 00.
// Faults are applied as explicit Pauli matrices on the dense oracle.
template <class Accept>
double exact_wrong_rate(const Circuit& c, double eps1, double eps2, Accept accept) {
  const std::size_t n_gates = c.gates.size();
  std::vector<std::size_t> options(n_gates);
  for (std::size_t i = 0; i < n_gates; ++i) options[i] = c.gates[i].arity() == 2 ? 16 : 4;
  std::vector<std::size_t> choice(n_gates, 0);
  double total = 0.0;
  const char* letters = "IXYZ";
  while (true) {
    double w = 1.0;
    Circuit faulty(c.n_qubits);
    faulty.measured = c.measured;
    for (std::size_t i = 0; i < n_gates; ++i) {
      const auto& g = c.gates[i];
      faulty.add(g);
      const double eps = g.arity() == 2 ? eps2 : eps1;
      const double per = eps / static_cast<double>(options[i] - 1);
      w *= choice[i] == 0 ? 1.0 - eps : per;
      if (choice[i] == 0) continue;
      std::size_t code = choice[i];
      for (std::size_t t = 0; t < g.arity(); ++t) {
        const std::size_t letter = g.arity() == 2 ? (t == 0 ? code / 4 : code % 4) : code;
        const char p = letters[letter];
        if (p == 'X') faulty.add(gates::x(g.qubits[t]));
        if (p == 'Y') faulty.add(gates::y(g.qubits[t]));
        if (p == 'Z') faulty.add(gates::z(g.qubits[t]));
      }
    }
    if (w > 0.0) {
      for (const auto& [bits, p] : oracle::distribution(faulty)) {
        if (!accept(bits)) continue;
        const std::string data = bits.substr(0, 4);
        if (data != "0000" && data != "1111") total += w * p;
      }
    }
    std::size_t k = 0;
    while (k < n_gates && ++choice[k] == options[k]) choice[k++] = 0;
    if (k == n_gates) break;
  }
  return total;
}

}  // namespace

TEST(Paulis, Enumeration) {
  EXPECT_EQ(nontrivial_paulis(1), (std::vector<std::string>{"X", "Y", "Z"}));
  const auto& two = nontrivial_paulis(2);
  ASSERT_EQ(two.size(), 15u);
  EXPECT_EQ(two.front(), "IX");
  EXPECT_EQ(two[2], "IZ");
  EXPECT_EQ(two[3], "XI");
  EXPECT_EQ(two.back(), "ZZ");
  EXPECT_THROW(nontrivial_paulis(3), std::invalid_argument);
}

TEST(SampleGateFault, ZeroProbabilityNeverFaults) {
  std::mt19937_64 rng(1);
  NoiseParams p;
  for (int i = 0; i < 10000; ++i) {
    EXPECT_FALSE(sample_gate_fault(GateKind::H, p, rng).has_value());
    EXPECT_FALSE(sample_gate_fault(GateKind::CNOT, p, rng).has_value());
  }
}

TEST(SampleGateFault, TwoQubitUniformOver15) {
  std::mt19937_64 rng(2);
  NoiseParams p;
  p.eps2 = 0.15;
  std::map<std::string, int> seen;
  const int draws = 1'000'000;
  for (int i = 0; i < draws; ++i) {
    if (auto f = sample_gate_fault(GateKind::CNOT, p, rng)) ++seen[*f];
  }
  ASSERT_EQ(seen.size(), 15u);
  for (const auto& [pauli, n] : seen) {
    EXPECT_LT(std::abs(n / double(draws) - 0.01), 3 * sigma(0.01, draws)) << pauli;
  }
}

TEST(SampleGateFault, SingleQubitThirds) {
  std::mt19937_64 rng(3);
  NoiseParams p;
  p.eps1 = 1.0;
  std::map<std::string, int> seen;
  const int draws = 100'000;
  for (int i = 0; i < draws; ++i) ++seen[*sample_gate_fault(GateKind::S, p, rng)];
  ASSERT_EQ(seen.size(), 3u);
  for (const auto& [pauli, n] : seen) {
    EXPECT_LT(std::abs(n / double(draws) - 1.0 / 3), 3 * sigma(1.0 / 3, draws)) << pauli;
  }
  // pairwise symmetry: difference of two multinomial cells
  const double sd = std::sqrt(draws * 2.0 / 3.0);
  EXPECT_LT(std::abs(seen["X"] - seen["Y"]), 3 * sd);
  EXPECT_LT(std::abs(seen["Y"] - seen["Z"]), 3 * sd);
}

TEST(SampleGateFault, RzIsNoiseless) {
  std::mt19937_64 rng(4);
  NoiseParams p;
  p.eps1 = 1.0;
  EXPECT_FALSE(sample_gate_fault(GateKind::RZ, p, rng).has_value());
  EXPECT_EQ(fault_probability(GateKind::RZ, p), 0.0);
}

TEST(Preparation, Flips) {
  std::mt19937_64 rng(5);
  EXPECT_TRUE(apply_preparation_flips(4, 0.0, rng).empty());
  EXPECT_EQ(apply_preparation_flips(4, 1.0, rng), (std::vector<std::size_t>{0, 1, 2, 3}));
}

TEST(Preparation, FlipOnQ2PreparesL01) {
  Circuit c(4, {gates::x(2)});
  c.add(encoder().gates).measure_all();
  const auto d = oracle::distribution(c);
  EXPECT_EQ(d.size(), 2u);
  EXPECT_NEAR(d.at("1100"), 0.5, 1e-12);
  EXPECT_NEAR(d.at("0011"), 0.5, 1e-12);
}

TEST(Measurement, FlipsIdentityAtZero) {
  std::mt19937_64 rng(6);
  EXPECT_EQ(apply_measurement_flips("0110", 0.0, rng), "0110");
  EXPECT_EQ(apply_measurement_flips("0110", 1.0, rng), "1001");
}

TEST(Measurement, UncodedLaw) {
  const double pm = 0.02;
  NoiseParams p;
  p.p_meas = pm;
  const double shots = 1e6;
  const auto counts = noisy_counts(Circuit(2).measure_all(), p, 1'000'000, 77);
  const double wrong = 1.0 - counts.count("00") / shots;
  const double want = 2 * pm - pm * pm;
  EXPECT_LT(std::abs(wrong - want), 3 * sigma(want, shots));
}

TEST(Measurement, CodedPostSelectedLaw) {
  const double pm = 0.02;
  NoiseParams p;
  p.p_meas = pm;
  const double shots = 1e6;
  const auto counts = noisy_counts(Circuit(4).measure_all(), p, 1'000'000, 78);
  double wrong = 0;
  for (const auto& [bits, n] : post_select(counts, false).retained.counts) {
    if (decode(bits) != LogicalValue::V00) wrong += n;
  }
  const double want = 6 * pm * pm * (1 - pm) * (1 - pm);
  EXPECT_LT(std::abs(wrong / shots - want), 3 * sigma(want, shots));
}

TEST(CoherentRotation, Insertion) {
  const auto c = insert_coherent_rotation(encoder(), 0.3);
  ASSERT_EQ(c.gates.size(), 5u);
  EXPECT_EQ(c.gates[0], gates::h(1));
  EXPECT_EQ(c.gates[1], gates::rz(1, 0.3));
  EXPECT_EQ(c.gates[2], gates::cnot(1, 0));
  EXPECT_THROW(insert_coherent_rotation(Circuit(2, {gates::h(0)}), 0.1), std::invalid_argument);
}

TEST(CoherentRotation, ZeroAndPiInvisibleOnBareEncoder) {
  for (double theta : {0.0, std::numbers::pi}) {
    const auto d = oracle::distribution(insert_coherent_rotation(encoder(), theta));
    EXPECT_EQ(d.size(), 2u);
    EXPECT_NEAR(d.at("0000"), 0.5, 1e-12);
    EXPECT_NEAR(d.at("1111"), 0.5, 1e-12);
  }
}

TEST(CoherentRotation, RetentionFollowsCosineLaw) {
  for (double theta : {0.0, 0.3, std::numbers::pi / 2, 2.0, std::numbers::pi}) {
    Circuit c = insert_coherent_rotation(encoder(), theta);
    c.add(coded_gate_circuit(LogicalGate::HHSWAP));
    const auto ps = post_select(oracle::distribution(c), false);
    EXPECT_NEAR(ps.r, std::pow(std::cos(theta / 2), 2), 1e-12) << theta;
    if (ps.r > 1e-9) {
      ASSERT_EQ(ps.retained.size(), 8u);
      for (const auto& [bits, p] : ps.retained) EXPECT_NEAR(p, 0.125, 1e-9);
    }
  }
}

TEST(TotallyMixed, Dimensions) {
  EXPECT_EQ(totally_mixed(2), (OutcomeDistribution{{"0", 0.5}, {"1", 0.5}}));
  const auto d4 = totally_mixed(4);
  EXPECT_EQ(d4.size(), 4u);
  for (const auto& [b, p] : d4) EXPECT_EQ(p, 0.25);
  const auto d16 = totally_mixed(16);
  EXPECT_EQ(d16.size(), 16u);
  for (const auto& [b, p] : d16) EXPECT_EQ(p, 1.0 / 16);
  EXPECT_THROW(totally_mixed(1), std::invalid_argument);
  EXPECT_THROW(totally_mixed(6), std::invalid_argument);
}

TEST(Depolarize, Mixing) {
  const OutcomeDistribution p{{"00", 1.0}};
  const auto half = depolarize(p, 0.5);
  EXPECT_DOUBLE_EQ(half.at("00"), 0.625);
  EXPECT_DOUBLE_EQ(half.at("11"), 0.125);
  EXPECT_EQ(depolarize(p, 1.0), totally_mixed(4));
  EXPECT_DOUBLE_EQ(depolarize(p, 0.0).at("00"), 1.0);
  EXPECT_THROW(depolarize(p, 1.5), std::invalid_argument);
}

TEST(NoiseParams, Validation) {
  NoiseParams p;
  EXPECT_NO_THROW(p.validate());
  p.eps1 = -0.1;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = {};
  p.xi = 1.1;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = {};
  p.theta = NAN;
  EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(PauliFrame, MatchesStatevectorFaultInjection) {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> kind(0, 8);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 4;
    Circuit c(n);
    std::uniform_int_distribution<std::size_t> q(0, n - 1);
    for (int i = 0; i < 12; ++i) {
      GateInstance g{static_cast<GateKind>(kind(rng)), {q(rng), 0}};
      if (g.kind == GateKind::RZ) g.angle = std::numbers::pi / 2 * std::uniform_int_distribution<int>(-3, 3)(rng);
      if (g.arity() == 2) {
        do g.qubits[1] = q(rng);
        while (g.qubits[1] == g.qubits[0]);
      }
      c.add(g);
    }
    c.measure_all();
    ASSERT_TRUE(std::all_of(c.gates.begin(), c.gates.end(), is_clifford));
    const std::size_t at = std::uniform_int_distribution<std::size_t>(0, c.gates.size() - 1)(rng);
    const auto& paulis = nontrivial_paulis(c.gates[at].arity());
    const auto pauli = paulis[std::uniform_int_distribution<std::size_t>(0, paulis.size() - 1)(rng)];

    PauliFrame f;
    f.inject(c.gates[at], pauli);
    for (std::size_t i = at + 1; i < c.gates.size(); ++i) f.propagate(c.gates[i]);

    Circuit faulty(n);
    for (std::size_t i = 0; i < c.gates.size(); ++i) {
      faulty.add(c.gates[i]);
      if (i != at) continue;
      for (std::size_t t = 0; t < pauli.size(); ++t) {
        if (pauli[t] != 'I') faulty.add(GateInstance{*gate_from_name(std::string(1, pauli[t])), {c.gates[i].qubits[t], 0}});
      }
    }
    faulty.measure_all();
    const auto ideal = oracle::distribution(c);
    const auto got = oracle::distribution(faulty);
    for (const auto& [bits, p] : ideal) {
      std::string shifted = bits;
      for (std::size_t k = 0; k < n; ++k) {
        if ((f.x >> k) & 1u) shifted[k] = shifted[k] == '0' ? '1' : '0';
      }
      ASSERT_NEAR(got.count(shifted) ? got.at(shifted) : 0.0, p, 1e-10) << "trial " << trial;
    }
  }
  EXPECT_FALSE(is_clifford(gates::rz(0, 0.1)));
  EXPECT_TRUE(is_clifford(gates::rz(0, -std::numbers::pi)));
}

TEST(NoisyCounts, ZeroNoiseEqualsSampling) {
  Circuit c = encoder();
  c.add(coded_gate_circuit(LogicalGate::HHSWAP));
  EXPECT_EQ(noisy_counts(c, {}, 10'000, 31), sample_counts(ideal_distribution(c), 10'000, 31));
  SimOptions sv{Engine::StateVector, 1};
  EXPECT_EQ(noisy_counts(c, {}, 10'000, 31, sv), sample_counts(ideal_distribution(c), 10'000, 31));
}

TEST(NoisyCounts, IndependentOfJobs) {
  Circuit c = insert_coherent_rotation(encoder(), 0.4);
  c.add(coded_gate_circuit(LogicalGate::HHSWAP));
  NoiseParams p{0.01, 0.05, 0.02, 0.01, 0.0, 0.0};
  const auto one = noisy_counts(c, p, 20'000, 9, {Engine::Auto, 1});
  EXPECT_EQ(one, noisy_counts(c, p, 20'000, 9, {Engine::Auto, 3}));
  EXPECT_EQ(one, noisy_counts(c, p, 20'000, 9, {Engine::Auto, 8}));
  EXPECT_NE(one, noisy_counts(c, p, 20'000, 10, {Engine::Auto, 1}));
  EXPECT_EQ(one.total, 20'000u);
}

TEST(NoisyCounts, FrameAndStatevectorAgree) {
  Circuit c = encoder();
  for (auto g : {LogicalGate::CZZZ, LogicalGate::HHSWAP, LogicalGate::X0, LogicalGate::HHSWAP}) {
    c.add(coded_gate_circuit(g));
  }
  c.add(gates::cnot(0, 3));
  NoiseParams p{0.05, 0.1, 0.03, 0.02, 0.0, 0.0};
  const std::uint64_t shots = 200'000;
  const auto a = noisy_counts(c, p, shots, 1, {Engine::PauliFrame, 1}).frequencies();
  const auto b = noisy_counts(c, p, shots, 2, {Engine::StateVector, 1}).frequencies();
  for (std::uint32_t v = 0; v < 16; ++v) {
    const auto k = unpack_bits(v, 4);
    const double pa = a.count(k) ? a.at(k) : 0.0, pb = b.count(k) ? b.at(k) : 0.0;
    const double pool = 0.5 * (pa + pb);
    EXPECT_LT(std::abs(pa - pb), 4 * std::sqrt(2 * pool * (1 - pool) / shots) + 1e-9) << k;
  }
}

TEST(NoisyCounts, FrameEngineRejectsNonClifford) {
  Circuit c = insert_coherent_rotation(encoder(), 0.3);
  EXPECT_THROW(noisy_counts(c, {}, 10, 1, {Engine::PauliFrame, 1}), std::invalid_argument);
  EXPECT_THROW(noisy_counts(c, {}, 0, 1), std::invalid_argument);
}

TEST(NoisyCounts, EncoderResidualMatchesExactEnumeration) {
  const double eps2 = 0.05;
  NoiseParams p;
  p.eps2 = eps2;
  const double exact = exact_wrong_rate(encoder(), 0.0, eps2, [](const std::string& b) { return even_parity(b); });
  // first order 8 eps2 / 15, corrections are O(eps2^2)
  EXPECT_NEAR(exact, 8 * eps2 / 15, 3 * eps2 * eps2);
  const double shots = 400'000;
  const auto counts = noisy_counts(encoder(), p, 400'000, 21);
  double wrong = 0;
  for (const auto& [bits, n] : post_select(counts, false).retained.counts) {
    if (decode(bits) != LogicalValue::V00) wrong += n;
  }
  EXPECT_LT(std::abs(wrong / shots - exact), 3 * sigma(exact, shots));
}

TEST(NoisyCounts, AncillaEncoderResidualIsSecondOrder) {
  const double eps2 = 0.01;
  NoiseParams p;
  p.eps2 = eps2;
  const double shots = 400'000;
  const auto counts = noisy_counts(build_encoder(LogicalState::L00, EncoderVariant::AncillaChecked), p, 400'000, 22);
  double wrong = 0;
  for (const auto& [bits, n] : post_select(counts, true).retained.counts) {
    if (decode(bits) != LogicalValue::V00) wrong += n;
  }
  // 10 CNOT pairs at most, each pair at most eps2^2
  EXPECT_LT(wrong / shots, 10 * eps2 * eps2);
  EXPECT_LT(wrong / shots, 0.25 * 8 * eps2 / 15);
}
