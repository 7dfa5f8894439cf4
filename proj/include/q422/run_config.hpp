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

#include <charconv>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "q422/circuit_io.hpp"
#include "q422/code422.hpp"
#include "q422/experiments.hpp"
#include "q422/noise.hpp"

/// Flat `key = value` experiment manifests.
///
///   gate_set     reduced | full | hhswap
///   lengths      comma list; items are N, A:B or A:B:STEP (inclusive)
///   seeds        sequences per length
///   seed         first sequence seed
///   shots        shots per circuit
///   eps1 eps2 p_meas p_prep theta xi
///   thetas       comma list of angles for sweep-theta; "pi", "pi/8", "3pi/4" accepted
///   analytic_xi  true | false
///   coupling     "linear" (5-qubit chain) or pairs like 0-1,1-2
///   output       CSV path
///   json         optional JSON sidecar path
///   mode         printed | full (prediction polynomial)
///   jobs         worker threads
///
/// `#` starts a comment. Unknown keys are errors.
namespace q422 {

struct RunConfig {
  GateSetId gate_set = GateSetId::Reduced;
  std::vector<std::uint64_t> lengths{1};
  std::uint64_t seeds = 1;
  std::uint64_t seed = 0;
  std::uint64_t shots = kDefaultShots;
  NoiseParams params;
  std::vector<double> thetas{0.0};
  bool analytic_xi = false;
  std::optional<CouplingMap> coupling;
  std::string output;
  std::string json;
  PredictionMode mode = PredictionMode::Printed;
  unsigned jobs = 1;

  static const std::vector<std::string>& keys() {
    static const std::vector<std::string> k{"gate_set", "lengths", "seeds", "seed",   "shots",       "eps1",
                                            "eps2",     "p_meas",  "p_prep", "theta", "xi",          "thetas",
                                            "analytic_xi", "coupling", "output", "json", "mode", "jobs"};
    return k;
  }

  void set(std::string_view key, std::string_view value);
  void validate() const;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

inline std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto pos = s.find(',', start);
    if (pos == std::string_view::npos) pos = s.size();
    const auto item = trim(s.substr(start, pos - start));
    if (item.empty()) throw std::invalid_argument("empty item in list '" + std::string(s) + "'");
    out.push_back(item);
    start = pos + 1;
  }
  return out;
}

inline std::uint64_t config_u64(std::string_view key, std::string_view v) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw std::invalid_argument(std::string(key) + ": expected a non-negative integer, got '" + std::string(v) + "'");
  }
  return out;
}

inline double config_f64(std::string_view key, std::string_view v) {
  double out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(out)) {
    throw std::invalid_argument(std::string(key) + ": expected a number, got '" + std::string(v) + "'");
  }
  return out;
}

/// Plain number, or [k]pi[/n].
inline double config_angle(std::string_view v) {
  const auto pi = v.find("pi");
  if (pi == std::string_view::npos) return config_f64("thetas", v);
  double k = 1.0, n = 1.0;
  const auto head = v.substr(0, pi);
  if (head == "-") {
    k = -1.0;
  } else if (!head.empty()) {
    k = config_f64("thetas", head);
  }
  const auto tail = v.substr(pi + 2);
  if (!tail.empty()) {
    if (tail[0] != '/') throw std::invalid_argument("thetas: cannot parse angle '" + std::string(v) + "'");
    n = config_f64("thetas", tail.substr(1));
    if (n == 0.0) throw std::invalid_argument("thetas: division by zero in '" + std::string(v) + "'");
  }
  return k * std::numbers::pi / n;
}

inline std::vector<std::uint64_t> config_lengths(std::string_view v) {
  std::vector<std::uint64_t> out;
  for (auto item : split_list(v)) {
    const auto c1 = item.find(':');
    if (c1 == std::string_view::npos) {
      out.push_back(config_u64("lengths", item));
      continue;
    }
    const auto c2 = item.find(':', c1 + 1);
    const auto a = config_u64("lengths", item.substr(0, c1));
    const auto b = config_u64("lengths", item.substr(c1 + 1, c2 == std::string_view::npos ? std::string_view::npos
                                                                                          : c2 - c1 - 1));
    const auto step = c2 == std::string_view::npos ? 1 : config_u64("lengths", item.substr(c2 + 1));
    if (step == 0 || b < a) throw std::invalid_argument("lengths: bad range '" + std::string(item) + "'");
    for (auto L = a; L <= b; L += step) out.push_back(L);
  }
  return out;
}

inline CouplingMap config_coupling(std::string_view v) {
  if (v == "linear") return CouplingMap::linear(kDataQubits + 1);
  CouplingMap m{kDataQubits + 1, {}};
  for (auto item : split_list(v)) {
    const auto dash = item.find('-');
    if (dash == std::string_view::npos) throw std::invalid_argument("coupling: expected a-b, got '" + std::string(item) + "'");
    m.pairs.emplace_back(config_u64("coupling", item.substr(0, dash)), config_u64("coupling", item.substr(dash + 1)));
  }
  m.validate();
  return m;
}

inline bool config_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument(std::string(key) + ": expected true or false, got '" + std::string(v) + "'");
}

}  // namespace detail

inline void RunConfig::set(std::string_view key, std::string_view raw) {
  using namespace detail;
  const auto v = trim(raw);
  if (key == "gate_set") {
    const auto id = gate_set_from_string(v);
    if (!id) throw std::invalid_argument("gate_set: unknown gate set '" + std::string(v) + "'");
    gate_set = *id;
  } else if (key == "lengths") {
    lengths = config_lengths(v);
  } else if (key == "seeds") {
    seeds = config_u64(key, v);
  } else if (key == "seed") {
    seed = config_u64(key, v);
  } else if (key == "shots") {
    shots = config_u64(key, v);
  } else if (key == "eps1") {
    params.eps1 = config_f64(key, v);
  } else if (key == "eps2") {
    params.eps2 = config_f64(key, v);
  } else if (key == "p_meas") {
    params.p_meas = config_f64(key, v);
  } else if (key == "p_prep") {
    params.p_prep = config_f64(key, v);
  } else if (key == "theta") {
    params.theta = config_angle(v);
  } else if (key == "xi") {
    params.xi = config_f64(key, v);
  } else if (key == "thetas") {
    thetas.clear();
    for (auto item : split_list(v)) thetas.push_back(config_angle(item));
  } else if (key == "analytic_xi") {
    analytic_xi = config_bool(key, v);
  } else if (key == "coupling") {
    coupling = config_coupling(v);
  } else if (key == "output") {
    output = std::string(v);
  } else if (key == "json") {
    json = std::string(v);
  } else if (key == "mode") {
    if (v == "printed") {
      mode = PredictionMode::Printed;
    } else if (v == "full") {
      mode = PredictionMode::FullPolynomial;
    } else {
      throw std::invalid_argument("mode: expected printed or full, got '" + std::string(v) + "'");
    }
  } else if (key == "jobs") {
    jobs = static_cast<unsigned>(config_u64(key, v));
  } else {
    throw std::invalid_argument("unknown config key '" + std::string(key) + "'");
  }
}

inline void RunConfig::validate() const {
  params.validate();
  if (lengths.empty()) throw std::invalid_argument("lengths: at least one length required");
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    SequenceSpec{gate_set, lengths[i], 0}.validate();
    if (i > 0 && lengths[i] <= lengths[i - 1]) throw std::invalid_argument("lengths must be strictly increasing");
  }
  if (seeds == 0) throw std::invalid_argument("seeds must be positive");
  if (shots == 0) throw std::invalid_argument("shots must be positive");
  if (jobs == 0) throw std::invalid_argument("jobs must be positive");
  if (thetas.empty()) throw std::invalid_argument("thetas: at least one angle required");
  if (analytic_xi && !params.stochastic_free()) {
    throw std::invalid_argument("analytic_xi cannot be combined with eps1/eps2/p_meas/p_prep");
  }
}

/// Applies every `key = value` line of `in` to `config`.
inline void load_config(std::istream& in, RunConfig& config) {
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    std::string_view s = line;
    if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = detail::trim(s);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) throw ParseError(n, "expected key = value");
    try {
      config.set(detail::trim(s.substr(0, eq)), s.substr(eq + 1));
    } catch (const std::logic_error& e) {  // invalid_argument or out_of_range
      throw ParseError(n, e.what());
    }
  }
}

inline RunConfig parse_config(std::string_view text) {
  RunConfig c;
  std::istringstream in{std::string(text)};
  load_config(in, c);
  return c;
}

}  // namespace q422
