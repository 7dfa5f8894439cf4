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

#include <numbers>
#include <set>

#include "q422/run_config.hpp"

using namespace q422;

TEST(RunConfig, Defaults) {
  const RunConfig c;
  EXPECT_EQ(c.gate_set, GateSetId::Reduced);
  EXPECT_EQ(c.shots, 8192u);
  EXPECT_EQ(c.lengths, (std::vector<std::uint64_t>{1}));
  EXPECT_EQ(c.jobs, 1u);
  EXPECT_FALSE(c.coupling.has_value());
  EXPECT_NO_THROW(c.validate());
}

TEST(RunConfig, KeysAreUnique) {
  const auto& k = RunConfig::keys();
  EXPECT_EQ(std::set<std::string>(k.begin(), k.end()).size(), k.size());
  // every listed key is accepted by set()
  for (const auto& key : k) {
    RunConfig c;
    const std::string value = key == "gate_set"      ? "full"
                              : key == "coupling"    ? "linear"
                              : key == "analytic_xi" ? "false"
                              : key == "mode"        ? "full"
                              : key == "output" || key == "json" ? "x.csv"
                                                                 : "1";
    EXPECT_NO_THROW(c.set(key, value)) << key;
  }
}

TEST(RunConfig, ParsesManifest) {
  const auto c = parse_config(R"(# low-noise sweep
gate_set = reduced
lengths = 1:3, 10, 20:100:40   # mixed forms
seeds = 60
seed=5
shots = 4096
eps1 = 4e-3
eps2 = 0.16
p_meas = 0.02
thetas = 0, pi/8, pi/4, -pi, 3pi/4, 0.5
coupling = 0-1, 1-2 ,2-3
output = out/run.csv
mode = full
jobs = 8
)");
  EXPECT_EQ(c.lengths, (std::vector<std::uint64_t>{1, 2, 3, 10, 20, 60, 100}));
  EXPECT_EQ(c.seeds, 60u);
  EXPECT_EQ(c.seed, 5u);
  EXPECT_EQ(c.shots, 4096u);
  EXPECT_EQ(c.params.eps1, 4e-3);
  EXPECT_EQ(c.params.eps2, 0.16);
  EXPECT_EQ(c.params.p_meas, 0.02);
  ASSERT_EQ(c.thetas.size(), 6u);
  EXPECT_EQ(c.thetas[1], std::numbers::pi / 8);
  EXPECT_EQ(c.thetas[3], -std::numbers::pi);
  EXPECT_EQ(c.thetas[4], 3 * std::numbers::pi / 4);
  EXPECT_EQ(c.thetas[5], 0.5);
  ASSERT_TRUE(c.coupling.has_value());
  EXPECT_EQ(c.coupling->pairs.size(), 3u);
  EXPECT_TRUE(c.coupling->allows(2, 1));
  EXPECT_EQ(c.output, "out/run.csv");
  EXPECT_EQ(c.mode, PredictionMode::FullPolynomial);
  EXPECT_EQ(c.jobs, 8u);
  EXPECT_NO_THROW(c.validate());
}

TEST(RunConfig, LinearCouplingIsFiveQubitChain) {
  const auto c = parse_config("coupling = linear\n");
  EXPECT_EQ(c.coupling->n_qubits, 5u);
  EXPECT_TRUE(c.coupling->allows(3, 4));
  EXPECT_FALSE(c.coupling->allows(0, 4));
}

TEST(RunConfig, ErrorsCarryLineNumbers) {
  auto line_of = [](const std::string& text) -> std::size_t {
    try {
      parse_config(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  EXPECT_EQ(line_of("seeds = 2\n\nbogus = 1\n"), 3u);
  EXPECT_EQ(line_of("# c\nshots = many\n"), 2u);
  EXPECT_EQ(line_of("shots 10\n"), 1u);
  EXPECT_EQ(line_of("gate_set = tiny\n"), 1u);
  EXPECT_EQ(line_of("lengths = 5:2\n"), 1u);
  EXPECT_EQ(line_of("lengths = 1,,2\n"), 1u);
  EXPECT_EQ(line_of("thetas = pi/0\n"), 1u);
  EXPECT_EQ(line_of("thetas = 2pix\n"), 1u);
  EXPECT_EQ(line_of("coupling = 0-9\n"), 1u);
  EXPECT_EQ(line_of("coupling = 0:1\n"), 1u);
  EXPECT_EQ(line_of("analytic_xi = maybe\n"), 1u);
  EXPECT_EQ(line_of("mode = exact\n"), 1u);
  EXPECT_EQ(line_of("eps1 = nan\n"), 1u);
}

TEST(RunConfig, ValidateRanges) {
  auto invalid = [](const std::string& text) {
    const auto c = parse_config(text);
    EXPECT_THROW(c.validate(), std::invalid_argument) << text;
  };
  invalid("eps1 = 1.5\n");
  invalid("p_meas = -0.1\n");
  invalid("xi = 2\n");
  invalid("lengths = 0\n");
  invalid("lengths = 1001\n");
  invalid("lengths = 5, 3\n");
  invalid("lengths = 3, 3\n");
  invalid("seeds = 0\n");
  invalid("shots = 0\n");
  invalid("jobs = 0\n");
  invalid("analytic_xi = true\neps2 = 0.1\n");
  EXPECT_NO_THROW(parse_config("analytic_xi = true\nxi = 0.5\nlengths = 1:1000\n").validate());
}

TEST(RunConfig, LaterValuesWin) {
  auto c = parse_config("shots = 10\nshots = 20\n");
  EXPECT_EQ(c.shots, 20u);
  c.set("shots", " 30 ");
  EXPECT_EQ(c.shots, 30u);
}
