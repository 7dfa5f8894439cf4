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
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "q422/circuit_io.hpp"
#include "q422/experiments.hpp"
#include "q422/ftcheck.hpp"

namespace q422 {

inline constexpr std::string_view kRecordHeader =
    "experiment_id,gate_set,L,seed,scheme,shots,gamma,r,D,D_decoded,output_dimension,eps1,eps2,p_meas,p_prep,theta,"
    "timestamp";

inline std::optional<Scheme> scheme_from_string(std::string_view s) {
  for (auto v : {Scheme::Uncoded, Scheme::CodedRaw, Scheme::CodedPS}) {
    if (to_string(v) == s) return v;
  }
  return std::nullopt;
}

inline std::string format_record(const ExperimentRecord& r) {
  if (r.experiment_id.find_first_of(",\n") != std::string::npos || r.timestamp.find_first_of(",\n") != std::string::npos) {
    throw std::invalid_argument("record text fields may not contain ',' or newlines");
  }
  using detail::format_double;
  std::string out;
  out += r.experiment_id + ',' + std::string(to_string(r.gate_set)) + ',' + std::to_string(r.length) + ',' +
         std::to_string(r.seed) + ',' + std::string(to_string(r.scheme)) + ',' + std::to_string(r.shots) + ',' +
         std::to_string(r.gamma) + ',' + format_double(r.r) + ',' + format_double(r.d) + ',' +
         format_double(r.d_decoded) + ',' + std::to_string(r.output_dimension) + ',' + format_double(r.params.eps1) +
         ',' + format_double(r.params.eps2) + ',' + format_double(r.params.p_meas) + ',' +
         format_double(r.params.p_prep) + ',' + format_double(r.params.theta) + ',' + r.timestamp;
  return out;
}

namespace detail {

inline std::uint64_t parse_u64(std::string_view tok, std::size_t line) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
    throw ParseError(line, "expected unsigned integer, got '" + std::string(tok) + "'");
  }
  return v;
}

inline double parse_f64(std::string_view tok, std::size_t line) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
    throw ParseError(line, "expected number, got '" + std::string(tok) + "'");
  }
  return v;
}

inline std::vector<std::string_view> split_commas(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(',', start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

}  // namespace detail

inline ExperimentRecord parse_record(std::string_view row, std::size_t line = 0) {
  const auto f = detail::split_commas(row);
  if (f.size() != 17) throw ParseError(line, "expected 17 fields, got " + std::to_string(f.size()));
  ExperimentRecord r;
  r.experiment_id = std::string(f[0]);
  const auto set = gate_set_from_string(f[1]);
  if (!set) throw ParseError(line, "unknown gate set '" + std::string(f[1]) + "'");
  r.gate_set = *set;
  r.length = detail::parse_u64(f[2], line);
  r.seed = detail::parse_u64(f[3], line);
  const auto scheme = scheme_from_string(f[4]);
  if (!scheme) throw ParseError(line, "unknown scheme '" + std::string(f[4]) + "'");
  r.scheme = *scheme;
  r.shots = detail::parse_u64(f[5], line);
  r.gamma = detail::parse_u64(f[6], line);
  r.r = detail::parse_f64(f[7], line);
  r.d = detail::parse_f64(f[8], line);
  r.d_decoded = detail::parse_f64(f[9], line);
  r.output_dimension = detail::parse_u64(f[10], line);
  r.params.eps1 = detail::parse_f64(f[11], line);
  r.params.eps2 = detail::parse_f64(f[12], line);
  r.params.p_meas = detail::parse_f64(f[13], line);
  r.params.p_prep = detail::parse_f64(f[14], line);
  r.params.theta = detail::parse_f64(f[15], line);
  r.timestamp = std::string(f[16]);
  return r;
}

inline void write_records_csv(std::ostream& out, std::span<const ExperimentRecord> records, bool header = true) {
  if (header) out << kRecordHeader << '\n';
  for (const auto& r : records) out << format_record(r) << '\n';
}

/// Reads a record CSV; the first line must be the header.
inline std::vector<ExperimentRecord> read_records_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kRecordHeader) throw ParseError(1, "missing or wrong record header");
  std::vector<ExperimentRecord> out;
  for (std::size_t n = 2; std::getline(in, line); ++n) {
    if (line.empty()) continue;
    out.push_back(parse_record(line, n));
  }
  return out;
}

/// Appends records to `path`, writing the header if the file is new or empty
/// and refusing to append to a file with a different header.
inline void append_records_csv(const std::filesystem::path& path, std::span<const ExperimentRecord> records) {
  bool need_header = true;
  if (std::filesystem::exists(path) && std::filesystem::file_size(path) > 0) {
    std::ifstream in(path);
    std::string first;
    std::getline(in, first);
    if (first != kRecordHeader) throw std::runtime_error(path.string() + ": existing file has a different header");
    need_header = false;
  }
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::app);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for appending");
  write_records_csv(out, records, need_header);
  if (!out) throw std::runtime_error("write to " + path.string() + " failed");
}

inline nlohmann::json to_json(const NoiseParams& p) {
  return {{"eps1", p.eps1}, {"eps2", p.eps2}, {"p_meas", p.p_meas},
          {"p_prep", p.p_prep}, {"theta", p.theta}, {"xi", p.xi}};
}

inline nlohmann::json to_json(const ExperimentRecord& r) {
  return {{"experiment_id", r.experiment_id},
          {"gate_set", to_string(r.gate_set)},
          {"L", r.length},
          {"seed", r.seed},
          {"scheme", to_string(r.scheme)},
          {"shots", r.shots},
          {"gamma", r.gamma},
          {"r", r.r},
          {"D", r.d},
          {"D_decoded", r.d_decoded},
          {"output_dimension", r.output_dimension},
          {"params", to_json(r.params)},
          {"timestamp", r.timestamp}};
}

inline nlohmann::json records_to_json(std::span<const ExperimentRecord> records) {
  auto arr = nlohmann::json::array();
  for (const auto& r : records) arr.push_back(to_json(r));
  return arr;
}

inline nlohmann::json to_json(const FTReport& report) {
  auto sites = nlohmann::json::array();
  for (const auto& s : report.sites) {
    sites.push_back({{"kind", s.site.kind == FaultSite::Kind::Gate ? "gate" : "preparation"},
                     {"index", s.site.index},
                     {"pauli", s.site.pauli},
                     {"classification", to_string(s.classification)}});
  }
  return {{"circuit_id", report.circuit_id},
          {"detection", to_string(report.detection)},
          {"fault_tolerant", report.fault_tolerant},
          {"undetected",
           {{"single_qubit_sites", report.undetected.single_qubit_sites},
            {"two_qubit_sites", report.undetected.two_qubit_sites},
            {"preparation_sites", report.undetected.preparation_sites}}},
          {"sites", sites}};
}

/// Per-gate summary plus every undetected site.
inline void print_ft_report(std::ostream& out, const FTReport& report, const Circuit& circuit) {
  out << "circuit: " << (report.circuit_id.empty() ? "<unnamed>" : report.circuit_id) << "\n";
  out << "detection: " << to_string(report.detection) << "\n";
  char buf[128];
  std::snprintf(buf, sizeof buf, "%-6s %-14s %6s %8s %8s %8s %10s\n", "index", "gate", "sites", "harmless",
                "det_ps", "det_anc", "undetected");
  out << buf;
  std::vector<std::array<std::size_t, 4>> per_gate(circuit.gates.size(), {0, 0, 0, 0});
  std::array<std::size_t, 4> prep{0, 0, 0, 0};
  for (const auto& s : report.sites) {
    auto& row = s.site.kind == FaultSite::Kind::Gate ? per_gate[s.site.index] : prep;
    ++row[static_cast<std::size_t>(s.classification)];
  }
  auto line = [&](const std::string& idx, const std::string& name, const std::array<std::size_t, 4>& c) {
    std::snprintf(buf, sizeof buf, "%-6s %-14s %6zu %8zu %8zu %8zu %10zu\n", idx.c_str(), name.c_str(),
                  c[0] + c[1] + c[2] + c[3], c[0], c[1], c[2], c[3]);
    out << buf;
  };
  if (prep[0] + prep[1] + prep[2] + prep[3] > 0) line("-", "preparation", prep);
  for (std::size_t i = 0; i < circuit.gates.size(); ++i) line(std::to_string(i), serialize_gate(circuit.gates[i]), per_gate[i]);
  out << "undetected sites:";
  bool any = false;
  for (const auto& s : report.sites) {
    if (s.classification != FaultClassification::UndetectedLogicalError) continue;
    any = true;
    if (s.site.kind == FaultSite::Kind::Gate) {
      out << " " << s.site.pauli << "@" << s.site.index;
    } else {
      out << " prep:X@q" << s.site.index;
    }
  }
  out << (any ? "\n" : " none\n");
  out << "fault tolerant: " << (report.fault_tolerant ? "yes" : "no") << "\n";
}

}  // namespace q422
