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
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "q422/sim.hpp"

// Line-based circuit text format:
//
//   # comment
//   qubits 5
//   H 1
//   CNOT 1 0
//   RZ 1 0.785398
//   MEASURE 0 1 2 3
//
// The `qubits` header must come first and MEASURE, when present, last.
namespace q422 {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::size_t parse_index(std::string_view tok, std::size_t line) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
    throw ParseError(line, "expected a non-negative integer, got '" + std::string(tok) + "'");
  }
  return v;
}

inline double parse_angle(std::string_view tok, std::size_t line) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size() || !std::isfinite(v)) {
    throw ParseError(line, "malformed angle '" + std::string(tok) + "'");
  }
  return v;
}

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

inline Circuit parse_circuit(std::string_view text) {
  Circuit c;
  bool have_header = false;
  bool have_measure = false;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto toks = detail::split_ws(line);
    if (toks.empty()) continue;

    const std::string_view head = toks[0];
    if (!have_header) {
      if (head != "qubits") throw ParseError(line_no, "missing 'qubits' header");
      if (toks.size() != 2) throw ParseError(line_no, "'qubits' takes exactly one argument");
      const std::size_t n = detail::parse_index(toks[1], line_no);
      if (n == 0 || n > kMaxQubits) {
        throw ParseError(line_no, "qubit count must be between 1 and " + std::to_string(kMaxQubits));
      }
      c.n_qubits = n;
      have_header = true;
      continue;
    }
    if (have_measure) throw ParseError(line_no, "instruction after MEASURE");
    if (head == "qubits") throw ParseError(line_no, "duplicate 'qubits' header");

    auto check_index = [&](std::string_view tok) {
      const std::size_t q = detail::parse_index(tok, line_no);
      if (q >= c.n_qubits) {
        throw ParseError(line_no, "qubit index " + std::to_string(q) + " out of range for " +
                                      std::to_string(c.n_qubits) + " qubits");
      }
      return q;
    };

    if (head == "MEASURE") {
      std::vector<bool> seen(c.n_qubits, false);
      for (std::size_t i = 1; i < toks.size(); ++i) {
        const std::size_t q = check_index(toks[i]);
        if (seen[q]) throw ParseError(line_no, "qubit " + std::to_string(q) + " measured twice");
        seen[q] = true;
        c.measured.push_back(q);
      }
      have_measure = true;
      continue;
    }

    const auto kind = gate_from_name(head);
    if (!kind) throw ParseError(line_no, "unknown gate '" + std::string(head) + "'");
    const std::size_t arity = gate_arity(*kind);
    const std::size_t expected = arity + (*kind == GateKind::RZ ? 1 : 0);
    if (toks.size() - 1 != expected) {
      throw ParseError(line_no, std::string(head) + " expects " + std::to_string(expected) +
                                    " argument(s), got " + std::to_string(toks.size() - 1));
    }
    GateInstance g{*kind, {check_index(toks[1]), arity == 2 ? check_index(toks[2]) : 0}};
    if (*kind == GateKind::RZ) g.angle = detail::parse_angle(toks[2], line_no);
    if (arity == 2 && g.qubits[0] == g.qubits[1]) {
      throw ParseError(line_no, std::string(head) + " targets must be distinct");
    }
    c.gates.push_back(g);
  }
  if (!have_header) throw ParseError(line_no == 0 ? 1 : line_no, "missing 'qubits' header");
  return c;
}

inline std::string serialize_gate(const GateInstance& g) {
  std::string s(gate_name(g.kind));
  s += ' ' + std::to_string(g.qubits[0]);
  if (g.arity() == 2) s += ' ' + std::to_string(g.qubits[1]);
  if (g.kind == GateKind::RZ) s += ' ' + detail::format_double(g.angle);
  return s;
}

inline std::string serialize_circuit(const Circuit& c) {
  std::ostringstream out;
  out << "qubits " << c.n_qubits << '\n';
  for (const auto& g : c.gates) out << serialize_gate(g) << '\n';
  out << "MEASURE";
  for (std::size_t q : c.measured) out << ' ' << q;
  out << '\n';
  return out.str();
}

}  // namespace q422
