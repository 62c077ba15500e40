// Copyright 2026 The lgtest Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Command-line driver. Exit codes: 0 success, 1 verdict check failed
 * (--assert-violation), 2 invalid configuration or usage, 3 internal
 * invariant failure.
 */

#pragma once

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lgtest/analytics.hpp"
#include "lgtest/compiler.hpp"
#include "lgtest/experiment.hpp"
#include "lgtest/oracle.hpp"
#include "lgtest/qasm.hpp"
#include "lgtest/report.hpp"

namespace lgtest::cli {

enum ExitCode : int { kOk = 0, kVerdictFailed = 1, kInvalidConfig = 2, kInternalError = 3 };

enum class Format { Table, Json, Csv };

/// Everything a run needs. Defaults: theta = -3pi/4, 8192 shots, 10 repetitions, no noise.
struct RunConfig {
  double theta = protocols::kDeviceTheta;
  std::uint64_t shots = 8192;
  int repetitions = 10;
  std::uint64_t seed = 20170314;
  std::string mode = "auto";  // auto | device | ideal
  double p1 = 0.0, p2 = 0.0, eps_ro = 0.0, gamma_idle = 0.0;
  std::optional<double> kick;
  Format format = Format::Table;
  std::string out;  // JSON report path, empty = none
  std::vector<std::string> export_args;  // {protocol id, path}
  std::optional<int> sweep;
  bool assert_violation = false;

  /// auto picks the device gate set when theta is the device angle.
  protocols::GatesetMode gateset_mode() const {
    if (mode == "device") return protocols::GatesetMode::Device;
    if (mode == "ideal") return protocols::GatesetMode::Ideal;
    if (mode == "auto")
      return std::abs(theta - protocols::kDeviceTheta) <= 1e-12 ? protocols::GatesetMode::Device
                                                                 : protocols::GatesetMode::Ideal;
    throw ValidationError("mode must be auto, device or ideal");
  }

  protocols::ExperimentPlan plan() const {
    protocols::ExperimentPlan p;
    p.theta = theta;
    p.shots = shots;
    p.repetitions = repetitions;
    p.base_seed = seed;
    p.mode = gateset_mode();
    p.noise.p1 = p1;
    p.noise.p2 = p2;
    p.noise.eps_ro = eps_ro;
    p.noise.gamma_idle = gamma_idle;
    if (kick) p.noise = noise::invasive_o2(p.noise, *kick);
    p.validate();
    return p;
  }
};

inline Format parse_format(const std::string& s) {
  if (s == "table") return Format::Table;
  if (s == "json") return Format::Json;
  if (s == "csv") return Format::Csv;
  throw ValidationError("format must be table, json or csv");
}

/// Reads a JSON config document; unknown keys are rejected.
inline RunConfig load_config(const std::string& text, RunConfig cfg = {}) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "theta") cfg.theta = v.get<double>();
      else if (key == "shots") cfg.shots = v.get<std::uint64_t>();
      else if (key == "repetitions") cfg.repetitions = v.get<int>();
      else if (key == "seed") cfg.seed = v.get<std::uint64_t>();
      else if (key == "mode") cfg.mode = v.get<std::string>();
      else if (key == "format") cfg.format = parse_format(v.get<std::string>());
      else if (key == "out") cfg.out = v.get<std::string>();
      else if (key == "noise") {
        for (const auto& [nk, nv] : v.items()) {
          if (nk == "p1") cfg.p1 = nv.get<double>();
          else if (nk == "p2") cfg.p2 = nv.get<double>();
          else if (nk == "eps_ro") cfg.eps_ro = nv.get<double>();
          else if (nk == "gamma_idle") cfg.gamma_idle = nv.get<double>();
          else if (nk == "kick") {
            if (nv.is_null()) cfg.kick.reset();
            else cfg.kick = nv.get<double>();
          } else throw ValidationError("unknown noise key '" + nk + "'");
        }
      } else throw ValidationError("unknown config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad config value: ") + e.what());
  }
  return cfg;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot write '" + path + "'");
  f << content;
  if (!f) throw ValidationError("failed writing '" + path + "'");
}

/// Compiled, countermeasure-protected circuit of one protocol as QASM.
inline std::string export_protocol(const RunConfig& cfg, const std::string& id) {
  const auto pc = protocols::build_protocol(protocols::parse_protocol_id(id), cfg.theta, cfg.gateset_mode());
  return gateset::to_qasm(gateset::compile(pc.circuit));
}

struct RunOutput {
  protocols::PlanResult result;
  analytics::ProgramReport report;
  report::Prediction prediction;
  std::string json;  // report document
};

inline RunOutput execute(const RunConfig& cfg) {
  const auto plan = cfg.plan();
  RunOutput o;
  o.result = protocols::run_plan(plan);
  o.report = analytics::analyze(o.result);
  if (o.report.inequality_failures != 0) throw InvariantError("per-shot LG identity failed on protocol F shots");
  o.prediction = report::predict(plan.theta, plan.mode);
  o.json = report::report_json(plan, o.report, o.prediction).dump(2) + "\n";
  return o;
}

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Leggett-Garg program simulator with clumsiness-loophole checks"};
  RunConfig cfg;
  std::string config_path, format = "table";
  std::optional<double> theta, p1, p2, eps_ro, gamma, kick;
  std::optional<std::uint64_t> shots, seed;
  std::optional<int> reps, sweep;
  std::optional<std::string> mode, out_path;
  std::vector<std::string> export_args;
  bool assert_violation = false;

  app.add_option("--config", config_path, "JSON config document");
  app.add_option("--theta", theta, "measurement angle in radians (default -3pi/4)");
  app.add_option("--shots", shots, "shots per repetition (default 8192)");
  app.add_option("--reps", reps, "repetitions (default 10)");
  app.add_option("--seed", seed, "base seed");
  app.add_option("--mode", mode, "gate set: auto, device or ideal");
  app.add_option("--p1", p1, "single-qubit depolarizing probability");
  app.add_option("--p2", p2, "CNOT depolarizing probability");
  app.add_option("--eps-ro", eps_ro, "readout flip probability");
  app.add_option("--gamma", gamma, "idle amplitude damping per slot");
  app.add_option("--kick", kick, "invasive x rotation (radians) attached to O2");
  app.add_option("--format", format, "stdout format: table, json or csv");
  app.add_option("--out", out_path, "write the JSON report here");
  app.add_option("--export", export_args, "write protocol ID's circuit as QASM to PATH")->expected(2)->type_name("ID PATH");
  app.add_option("--sweep", sweep, "print an N-point theta sweep of the oracle routes as CSV");
  app.add_flag("--assert-violation", assert_violation, "exit 1 unless the verdict is violation_established");

  std::vector<const char*> argv{"lgtest"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalidConfig;
  }

  try {
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) throw ValidationError("cannot read config '" + config_path + "'");
      std::stringstream ss;
      ss << f.rdbuf();
      cfg = load_config(ss.str(), cfg);
    }
    if (theta) cfg.theta = *theta;
    if (shots) cfg.shots = *shots;
    if (reps) cfg.repetitions = *reps;
    if (seed) cfg.seed = *seed;
    if (mode) cfg.mode = *mode;
    if (p1) cfg.p1 = *p1;
    if (p2) cfg.p2 = *p2;
    if (eps_ro) cfg.eps_ro = *eps_ro;
    if (gamma) cfg.gamma_idle = *gamma;
    if (kick) cfg.kick = *kick;
    if (app.count("--format")) cfg.format = parse_format(format);
    if (out_path) cfg.out = *out_path;
    if (sweep) cfg.sweep = *sweep;
    cfg.export_args = export_args;
    cfg.assert_violation = assert_violation;

    if (!cfg.export_args.empty()) {
      write_file(cfg.export_args[1], export_protocol(cfg, cfg.export_args[0]));
      return kOk;
    }
    if (cfg.sweep) {
      if (*cfg.sweep < 2) throw ValidationError("sweep needs at least 2 points");
      const std::string csv = oracle::sweep_csv(oracle::sweep(oracle::uniform_thetas(*cfg.sweep)));
      if (cfg.out.empty()) out << csv;
      else write_file(cfg.out, csv);
      return kOk;
    }

    const RunOutput o = execute(cfg);
    switch (cfg.format) {
      case Format::Table: out << report::render_tables(o.report, o.prediction); break;
      case Format::Json: out << o.json; break;
      case Format::Csv: out << report::shots_csv(o.result); break;
    }
    if (!cfg.out.empty()) write_file(cfg.out, o.json);
    if (cfg.assert_violation && o.report.lg.verdict != analytics::Verdict::ViolationEstablished) return kVerdictFailed;
    return kOk;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidConfig;
  } catch (const InvariantError& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
}

}  // namespace lgtest::cli
