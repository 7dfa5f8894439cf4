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

#include <random>

#include "oracle.hpp"
#include "q422/circuit_io.hpp"

using namespace q422;

namespace {

std::size_t error_line(std::string_view text) {
  try {
    parse_circuit(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  ADD_FAILURE() << "no ParseError for: " << text;
  return 0;
}

std::string error_text(std::string_view text) {
  try {
    parse_circuit(text);
  } catch (const ParseError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(ParseCircuit, MinimalFile) {
  const auto c = parse_circuit("qubits 2\nH 0\nCNOT 0 1\nMEASURE 0 1");
  EXPECT_EQ(c.n_qubits, 2u);
  ASSERT_EQ(c.gates.size(), 2u);
  EXPECT_EQ(c.gates[0], gates::h(0));
  EXPECT_EQ(c.gates[1], gates::cnot(0, 1));
  EXPECT_EQ(c.measured, (std::vector<std::size_t>{0, 1}));
}

TEST(ParseCircuit, UnknownGateNamesLineAndToken) {
  EXPECT_EQ(error_line("qubits 2\nFOO 0"), 2u);
  EXPECT_NE(error_text("qubits 2\nFOO 0").find("FOO"), std::string::npos);
}

TEST(ParseCircuit, EncoderFile) {
  const auto c = parse_circuit("qubits 5\nH 1\nCNOT 1 0\nCNOT 1 2\nCNOT 2 3\nMEASURE 0 1 2 3");
  EXPECT_EQ(c.n_qubits, 5u);
  EXPECT_EQ(c.gates, (std::vector<GateInstance>{gates::h(1), gates::cnot(1, 0), gates::cnot(1, 2), gates::cnot(2, 3)}));
  EXPECT_EQ(c.measured, (std::vector<std::size_t>{0, 1, 2, 3}));
}

TEST(ParseCircuit, CommentsBlankLinesAndAngles) {
  const auto c = parse_circuit("# header comment\n\nqubits 3   # three\n  RZ 2 -0.5\nSWAP 0 2\n\nMEASURE 2\n# trailing\n");
  ASSERT_EQ(c.gates.size(), 2u);
  EXPECT_EQ(c.gates[0].kind, GateKind::RZ);
  EXPECT_DOUBLE_EQ(c.gates[0].angle, -0.5);
  EXPECT_EQ(c.measured, (std::vector<std::size_t>{2}));
}

TEST(ParseCircuit, MeasureOptional) {
  const auto c = parse_circuit("qubits 1\nX 0\n");
  EXPECT_TRUE(c.measured.empty());
}

TEST(ParseCircuit, Errors) {
  EXPECT_EQ(error_line(""), 1u);
  EXPECT_EQ(error_line("H 0\n"), 1u);
  EXPECT_EQ(error_line("qubits 2\nH 0 1\n"), 2u);          // wrong arity
  EXPECT_EQ(error_line("qubits 2\nCNOT 0\n"), 2u);         // wrong arity
  EXPECT_EQ(error_line("qubits 2\nX 0\nH 2\n"), 3u);       // out of range
  EXPECT_EQ(error_line("qubits 2\nRZ 0 abc\n"), 2u);       // malformed angle
  EXPECT_EQ(error_line("qubits 2\nRZ 0 nan\n"), 2u);
  EXPECT_EQ(error_line("qubits 2\nRZ 0\n"), 2u);
  EXPECT_EQ(error_line("qubits 2\nCZ 1 1\n"), 2u);
  EXPECT_EQ(error_line("qubits 2\nMEASURE 0 0\n"), 2u);
  EXPECT_EQ(error_line("qubits 2\nMEASURE 0\nX 1\n"), 3u);
  EXPECT_EQ(error_line("qubits 0\n"), 1u);
  EXPECT_EQ(error_line("qubits 13\n"), 1u);
  EXPECT_EQ(error_line("qubits 2\nqubits 3\n"), 2u);
  EXPECT_EQ(error_line("qubits -1\n"), 1u);
  EXPECT_EQ(error_line("qubits 2\nX x\n"), 2u);
}

TEST(SerializeCircuit, Format) {
  Circuit c(3, {gates::h(0), gates::rz(1, 0.25), gates::cz(2, 0)}, {1, 0});
  EXPECT_EQ(serialize_circuit(c), "qubits 3\nH 0\nRZ 1 0.25\nCZ 2 0\nMEASURE 1 0\n");
}

TEST(SerializeCircuit, RandomRoundTrip) {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 100; ++i) {
    const auto c = oracle::random_circuit(rng, 8, 30);
    const auto text = serialize_circuit(c);
    const auto back = parse_circuit(text);
    EXPECT_EQ(back, c) << text;
    EXPECT_EQ(serialize_circuit(back), text);
  }
}
