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


// q422: command-line front end for the [4,2,2] toolkit.
//
//   q422 emit-circuit --encoder L00 --variant nonft
//   q422 run --config sweep.cfg --jobs 4
//   q422 predict --lengths 1:100
//   q422 verify-ft --encoder L00 --variant ancilla
//   q422 sweep-theta --config theta.cfg
//   q422 bounds
//
// Exit codes: 0 success, 1 runtime failure, 2 bad usage or unknown names.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "q422/q422.hpp"

namespace {

using namespace q422;

constexpr int kUsageError = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::filesystem::path output_dir() {
  const char* env = std::getenv("Q422_OUTPUT_DIR");
  return env && *env ? std::filesystem::path(env) : std::filesystem::path(".");
}

// Config-file values first, then any flag given on the command line.
struct ConfigSource {
  std::string file;
  std::map<std::string, std::string> flags;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", file, "flat key = value config file");
    for (const auto& key : RunConfig::keys()) {
      std::string flag = "--" + key;
      std::replace(flag.begin(), flag.end(), '_', '-');
      cmd->add_option(flag, flags[key], "config key '" + key + "'");
    }
  }

  RunConfig load(CLI::App* cmd, unsigned jobs, RunConfig c = {}) const {
    c.jobs = jobs;
    try {
      if (!file.empty()) {
        std::ifstream in(file);
        if (!in) throw UsageError("cannot read config file " + file);
        load_config(in, c);
      }
      for (const auto& key : RunConfig::keys()) {
        std::string flag = "--" + key;
        std::replace(flag.begin(), flag.end(), '_', '-');
        if (cmd->count(flag) > 0) c.set(key, flags.at(key));
      }
      c.validate();
    } catch (const ParseError& e) {
      throw UsageError(file + ": " + e.what());
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    return c;
  }
};

std::filesystem::path resolve_output(const RunConfig& c, const char* fallback) {
  return c.output.empty() ? output_dir() / fallback : std::filesystem::path(c.output);
}

void check_coupling(const RunConfig& c) {
  if (!c.coupling) return;
  Circuit probe = build_encoder(LogicalState::L00, EncoderVariant::NonFaultTolerant);
  for (LogicalGate g : gate_set_members(c.gate_set)) {
    probe.add(coded_gate_circuit(g));
    probe.add(uncoded_gate_circuit(g));
  }
  const auto violations = validate_coupling(probe, *c.coupling);
  if (violations.empty()) return;
  std::string msg = "circuits violate the coupling map:";
  for (const auto& v : violations) {
    msg += " " + serialize_gate(probe.gates[v.gate_index]) + ";";
  }
  throw UsageError(msg);
}

void write_sidecar(const RunConfig& c, std::span<const ExperimentRecord> records) {
  if (c.json.empty()) return;
  nlohmann::json doc{{"params", to_json(c.params)},
                     {"gate_set", to_string(c.gate_set)},
                     {"shots", c.shots},
                     {"seeds", c.seeds},
                     {"seed", c.seed},
                     {"analytic_xi", c.analytic_xi},
                     {"sequence_sampling", "independent per (L, seed)"},
                     {"records", records_to_json(records)}};
  std::ofstream out(c.json);
  if (!out) throw std::runtime_error("cannot write " + c.json);
  out << doc.dump(2) << '\n';
}

void print_summary(std::ostream& out, std::span<const ExperimentRecord> records) {
  const auto cells = summarize(records);
  char buf[160];
  std::snprintf(buf, sizeof buf, "%6s  %-18s  %-18s  %-18s  %7s  %s\n", "L", "D uncoded", "D coded (raw)",
                "D coded (ps)", "r", "D_c<D_u");
  out << buf;
  std::map<std::uint64_t, bool> lengths;
  for (const auto& r : records) lengths[r.length] = true;
  for (const auto& [L, _] : lengths) {
    auto cell = [&](Scheme s) { return cells.at({L, s}); };
    auto fmt = [](const SummaryCell& c) {
      char b[40];
      std::snprintf(b, sizeof b, "%.4f +- %.4f", c.mean_d, c.stderr_d);
      return std::string(b);
    };
    const auto u = cell(Scheme::Uncoded), raw = cell(Scheme::CodedRaw), ps = cell(Scheme::CodedPS);
    std::snprintf(buf, sizeof buf, "%6llu  %-18s  %-18s  %-18s  %7.4f  %s\n", static_cast<unsigned long long>(L),
                  fmt(u).c_str(), fmt(raw).c_str(), fmt(ps).c_str(), ps.mean_r, ps.mean_d < u.mean_d ? "yes" : "no");
    out << buf;
  }
}

int cmd_emit(const std::string& encoder, const std::string& variant, const std::string& gate,
             const std::string& form, const std::string& sequence) {
  const int chosen = !encoder.empty() + !gate.empty() + !sequence.empty();
  if (chosen != 1) throw UsageError("emit-circuit needs exactly one of --encoder, --gate, --sequence");
  Circuit c;
  if (!encoder.empty()) {
    const auto label = logical_state_from_string(encoder);
    if (!label) throw UsageError("unknown encoder label '" + encoder + "'");
    const auto v = encoder_variant_from_string(variant);
    if (!v) throw UsageError("unknown encoder variant '" + variant + "'");
    try {
      c = build_encoder(*label, *v);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    // Encoders are printed on the 5-qubit device register; q4 idles without the ancilla check.
    c.n_qubits = kDataQubits + 1;
  } else if (!gate.empty()) {
    const auto g = logical_gate_from_string(gate);
    if (!g) throw UsageError("unknown logical gate '" + gate + "'");
    if (form == "coded") {
      c = Circuit(kDataQubits, coded_gate_circuit(*g));
    } else if (form == "uncoded") {
      c = Circuit(2, uncoded_gate_circuit(*g));
    } else {
      throw UsageError("unknown form '" + form + "' (coded or uncoded)");
    }
    c.measure_all();
  } else {
    std::vector<LogicalGate> seq;
    for (auto item : detail::split_list(sequence)) {
      const auto g = logical_gate_from_string(item);
      if (!g) throw UsageError("unknown logical gate '" + std::string(item) + "'");
      seq.push_back(*g);
    }
    const auto pair = build_pair(seq);
    if (form == "coded") {
      c = pair.coded;
    } else if (form == "uncoded") {
      c = pair.uncoded;
    } else {
      throw UsageError("unknown form '" + form + "' (coded or uncoded)");
    }
  }
  std::cout << serialize_circuit(c);
  return 0;
}

int cmd_run(const RunConfig& c) {
  check_coupling(c);
  const auto records = sweep_lengths(c.gate_set, c.lengths, c.params, c.shots, c.seeds, c.seed,
                                     {c.analytic_xi, {Engine::Auto, c.jobs}});
  const auto path = resolve_output(c, "run.csv");
  append_records_csv(path, records);
  write_sidecar(c, records);
  print_summary(std::cout, records);
  std::cout << records.size() << " records appended to " << path.string() << "\n";
  return 0;
}

int cmd_sweep_theta(const RunConfig& c) {
  check_coupling(c);
  std::vector<ExperimentRecord> records;
  for (auto L : c.lengths) {
    for (std::uint64_t s = 0; s < c.seeds; ++s) {
      auto part = sweep_theta(c.thetas, c.gate_set, L, c.params, c.shots, c.seed + s,
                              {c.analytic_xi, {Engine::Auto, c.jobs}});
      records.insert(records.end(), part.begin(), part.end());
    }
  }
  const auto path = resolve_output(c, "sweep_theta.csv");
  append_records_csv(path, records);
  write_sidecar(c, records);
  char buf[128];
  std::snprintf(buf, sizeof buf, "%6s  %12s  %10s  %10s  %10s  %12s\n", "L", "theta", "D_u", "D_c(ps)", "r",
                "cos^2(t/2)");
  std::cout << buf;
  for (std::size_t i = 0; i + 2 < records.size(); i += 3) {
    const auto& u = records[i];
    const auto& ps = records[i + 2];
    std::snprintf(buf, sizeof buf, "%6llu  %12.6f  %10.4f  %10.4f  %10.4f  %12.4f\n",
                  static_cast<unsigned long long>(u.length), ps.params.theta, u.d, ps.d, ps.r,
                  std::pow(std::cos(ps.params.theta / 2.0), 2));
    std::cout << buf;
  }
  std::cout << records.size() << " records appended to " << path.string() << "\n";
  return 0;
}

int cmd_predict(const RunConfig& c) {
  const auto& lengths = c.lengths;
  std::vector<PredictionCurve> curves;
  for (auto s : {Scheme::Uncoded, Scheme::CodedRaw, Scheme::CodedPS}) {
    curves.push_back(prediction_curve(s, lengths, c.params, c.gate_set, c.mode));
  }
  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!c.output.empty()) {
    file.open(c.output);
    if (!file) throw std::runtime_error("cannot write " + c.output);
    out = &file;
  }
  write_prediction_csv(*out, curves);
  const auto cross = crossover_length(c.params, lengths.back(), c.gate_set, c.mode);
  (c.output.empty() ? std::cerr : std::cout)
      << "crossover: " << (cross ? "L = " + std::to_string(*cross) : "none up to L = " + std::to_string(lengths.back()))
      << "\n";
  return 0;
}

int cmd_verify_ft(const std::string& encoder, const std::string& variant, const std::string& circuit_file,
                  const std::string& detection, const std::string& json, bool prep, bool pairs, unsigned jobs) {
  if (encoder.empty() == circuit_file.empty()) throw UsageError("verify-ft needs exactly one of --encoder, --circuit");
  Circuit c;
  std::string id;
  bool ancilla_default = false;
  if (!encoder.empty()) {
    const auto label = logical_state_from_string(encoder);
    if (!label) throw UsageError("unknown encoder label '" + encoder + "'");
    const auto v = encoder_variant_from_string(variant);
    if (!v) throw UsageError("unknown encoder variant '" + variant + "'");
    try {
      c = build_encoder(*label, *v);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    id = encoder + "/" + variant;
    ancilla_default = *v == EncoderVariant::AncillaChecked;
  } else {
    std::ifstream in(circuit_file);
    if (!in) throw UsageError("cannot read circuit file " + circuit_file);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
      c = parse_circuit(ss.str());
    } catch (const ParseError& e) {
      throw UsageError(circuit_file + ": " + e.what());
    }
    id = circuit_file;
  }
  Detection det = ancilla_default ? Detection::PostSelectAncilla : Detection::PostSelect;
  if (detection == "postselect") {
    det = Detection::PostSelect;
  } else if (detection == "ancilla") {
    det = Detection::PostSelectAncilla;
  } else if (!detection.empty()) {
    throw UsageError("unknown detection '" + detection + "' (postselect or ancilla)");
  }
  const auto report = verify_single_fault_tolerance(c, det, id, prep, jobs);
  if (json == "-") {
    std::cout << to_json(report).dump(2) << "\n";
  } else {
    print_ft_report(std::cout, report, c);
    if (!json.empty()) {
      std::ofstream out(json);
      if (!out) throw std::runtime_error("cannot write " + json);
      out << to_json(report).dump(2) << "\n";
    }
  }
  if (pairs) std::cout << "undetected fault pairs: " << count_undetected_fault_pairs(c, det) << "\n";
  return 0;
}

int cmd_bounds() {
  struct Row {
    const char* name;
    OutcomeDistribution uncoded;
    OutcomeDistribution coded;
  };
  const Row rows[] = {
      {"1", {{"00", 1.0}}, codeword_distribution(LogicalState::L00)},
      {"2", {{"00", 0.5}, {"11", 0.5}}, codeword_distribution(LogicalState::LPhiPlus)},
      {"4", totally_mixed(4), ideal_distribution(build_encoder(LogicalState::L00, EncoderVariant::NonFaultTolerant)
                                                     .add(coded_gate_circuit(LogicalGate::HHSWAP)))},
  };
  char buf[128];
  std::snprintf(buf, sizeof buf, "%-10s  %-22s  %-26s\n", "dimension", "uncoded (4 outcomes)",
                "coded ps (16 outcomes)");
  std::cout << buf;
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%-10s  %-22.6f  %-26.6f\n", r.name, worst_case_bound(r.uncoded),
                  worst_case_bound_coded_ps(r.coded));
    std::cout << buf;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"[4,2,2] code simulation and analysis"};
  app.require_subcommand(1);
  unsigned jobs = 1;
  app.add_option("--jobs,-j", jobs, "worker threads")->check(CLI::PositiveNumber);

  auto* emit = app.add_subcommand("emit-circuit", "print an encoder, gate block or sequence circuit");
  std::string encoder, variant = "nonft", gate, form = "coded", sequence;
  emit->add_option("--encoder", encoder, "L00 L01 L10 L11 L0plus LPhiPlus");
  emit->add_option("--variant", variant, "nonft or ancilla");
  emit->add_option("--gate", gate, "X0 X1 Z0 Z1 CZZZ HHSWAP");
  emit->add_option("--form", form, "coded or uncoded");
  emit->add_option("--sequence", sequence, "comma-separated logical gates");

  ConfigSource run_src, predict_src, theta_src;
  auto* run = app.add_subcommand("run", "random-sequence sweep over lengths; appends CSV records");
  run_src.attach(run);
  auto* predict = app.add_subcommand("predict", "closed-form error curves as CSV");
  predict_src.attach(predict);
  auto* theta = app.add_subcommand("sweep-theta", "coherent rotation sweep; appends CSV records");
  theta_src.attach(theta);

  auto* verify = app.add_subcommand("verify-ft", "exhaustive single-fault check");
  std::string v_encoder, v_variant = "nonft", v_circuit, v_detection, v_json;
  bool v_prep = false, v_pairs = false;
  verify->add_option("--encoder", v_encoder, "encoder label");
  verify->add_option("--variant", v_variant, "nonft or ancilla");
  verify->add_option("--circuit", v_circuit, "circuit file");
  verify->add_option("--detection", v_detection, "postselect or ancilla");
  verify->add_option("--json", v_json, "write the report as JSON ('-' for stdout)");
  verify->add_flag("--prep", v_prep, "include preparation X faults");
  verify->add_flag("--pairs", v_pairs, "also count undetected fault pairs");

  auto* bounds = app.add_subcommand("bounds", "worst-case trace distance by output dimension");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kUsageError;
  }

  try {
    if (*emit) return cmd_emit(encoder, variant, gate, form, sequence);
    if (*run) return cmd_run(run_src.load(run, jobs));
    if (*theta) return cmd_sweep_theta(theta_src.load(theta, jobs));
    if (*predict) {
      RunConfig defaults;
      defaults.lengths = detail::config_lengths("1:100");
      return cmd_predict(predict_src.load(predict, jobs, defaults));
    }
    if (*verify) return cmd_verify_ft(v_encoder, v_variant, v_circuit, v_detection, v_json, v_prep, v_pairs, jobs);
    if (*bounds) return cmd_bounds();
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kUsageError;
}
