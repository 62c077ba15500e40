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
 * OpenQASM 2.0 subset reader/writer. Grammar (one statement per line, LF):
 *
 *   OPENQASM 2.0;
 *   include "qelib1.inc";
 *   qreg q[N];                       N in 1..5
 *   creg c[N];
 *   <g> q[i];                        g in x y z h s sdg t tdg id
 *   rx(<angle>) q[i];                ideal gate set only
 *   cx q[i],q[j];
 *   measure q[i] -> c[i];
 *
 * Blank lines and `//` comments are ignored. Gate statements are written in
 * slot order; reading schedules them as soon as possible, so slot numbers
 * are not preserved but per-qubit order and CNOT alignment are.
 */

#pragma once

#include <charconv>
#include <cstdio>
#include <regex>
#include <sstream>
#include <string>

#include "lgtest/circuit.hpp"

namespace lgtest::gateset {

class QasmParseError : public ValidationError {
 public:
  QasmParseError(int line, const std::string& what)
      : ValidationError("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

inline std::string format_angle(double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", a);
  return buf;
}

inline std::string to_qasm(const Circuit& c) {
  std::ostringstream out;
  out << "OPENQASM 2.0;\n"
      << "include \"qelib1.inc\";\n"
      << "qreg q[" << c.n_qubits() << "];\n"
      << "creg c[" << c.n_qubits() << "];\n";
  for (const Gate& g : c.gates()) {
    switch (g.kind) {
      case GateKind::CNOT:
        out << "cx q[" << g.qubit << "],q[" << g.target << "];\n";
        break;
      case GateKind::RX:
        out << "rx(" << format_angle(g.angle) << ") q[" << g.qubit << "];\n";
        break;
      default:
        out << to_string(g.kind) << " q[" << g.qubit << "];\n";
    }
  }
  for (const Measurement& m : c.measurements())
    out << "measure q[" << m.qubit << "] -> c[" << m.qubit << "];\n";
  return out.str();
}

inline Circuit from_qasm(const std::string& text) {
  static const std::regex kHeader(R"(OPENQASM\s+2\.0\s*;)");
  static const std::regex kInclude(R"(include\s+"qelib1\.inc"\s*;)");
  static const std::regex kQreg(R"(qreg\s+q\s*\[\s*(\d+)\s*\]\s*;)");
  static const std::regex kCreg(R"(creg\s+c\s*\[\s*(\d+)\s*\]\s*;)");
  static const std::regex kSingle(R"(([a-z]+)\s+q\s*\[\s*(\d+)\s*\]\s*;)");
  static const std::regex kRx(R"(rx\s*\(\s*([^)\s]+)\s*\)\s+q\s*\[\s*(\d+)\s*\]\s*;)");
  static const std::regex kCx(R"(cx\s+q\s*\[\s*(\d+)\s*\]\s*,\s*q\s*\[\s*(\d+)\s*\]\s*;)");
  static const std::regex kMeasure(R"(measure\s+q\s*\[\s*(\d+)\s*\]\s*->\s*c\s*\[\s*(\d+)\s*\]\s*;)");

  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  int n_qubits = -1;
  bool seen_header = false;
  // Gates are collected in order then scheduled ASAP.
  std::vector<Gate> gates;
  std::vector<int> measured;

  auto index = [&](const std::string& s) {
    const int q = std::stoi(s);
    if (n_qubits < 0) throw QasmParseError(line_no, "gate before qreg declaration");
    if (q >= n_qubits) throw QasmParseError(line_no, "qubit index " + s + " out of range");
    return q;
  };

  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw.substr(0, raw.find("//"));
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    line = line.substr(b, line.find_last_not_of(" \t\r") - b + 1);

    std::smatch m;
    if (std::regex_match(line, kHeader)) {
      seen_header = true;
      continue;
    }
    if (!seen_header) throw QasmParseError(line_no, "expected 'OPENQASM 2.0;'");
    if (std::regex_match(line, kInclude)) continue;
    if (std::regex_match(line, m, kQreg)) {
      if (n_qubits >= 0) throw QasmParseError(line_no, "only one quantum register is supported");
      n_qubits = std::stoi(m[1]);
      if (n_qubits < 1 || n_qubits > qsim::kMaxQubits) throw QasmParseError(line_no, "register size out of range");
      continue;
    }
    if (std::regex_match(line, m, kCreg)) {
      if (std::stoi(m[1]) != n_qubits) throw QasmParseError(line_no, "classical register must match qreg");
      continue;
    }
    if (std::regex_match(line, m, kMeasure)) {
      const int q = index(m[1]);
      if (std::stoi(m[2]) != q) throw QasmParseError(line_no, "measure must write c[i] for q[i]");
      measured.push_back(q);
      continue;
    }
    if (!measured.empty()) throw QasmParseError(line_no, "gate after measurement");
    if (std::regex_match(line, m, kCx)) {
      const int a = index(m[1]), t = index(m[2]);
      if (a == t) throw QasmParseError(line_no, "cx control equals target");
      gates.push_back(Gate::cnot(a, t, 0));
      continue;
    }
    if (std::regex_match(line, m, kRx)) {
      const std::string tok = m[1];
      double angle = 0.0;
      const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), angle);
      if (ec != std::errc() || ptr != tok.data() + tok.size()) throw QasmParseError(line_no, "bad angle '" + tok + "'");
      gates.push_back(Gate::rx(angle, index(m[2]), 0));
      continue;
    }
    if (std::regex_match(line, m, kSingle)) {
      static const std::pair<const char*, GateKind> kNames[] = {
          {"x", GateKind::X},   {"y", GateKind::Y}, {"z", GateKind::Z},     {"h", GateKind::H},  {"s", GateKind::S},
          {"sdg", GateKind::Sdg}, {"t", GateKind::T}, {"tdg", GateKind::Tdg}, {"id", GateKind::Id}};
      const std::string name = m[1];
      bool found = false;
      for (const auto& [n, k] : kNames) {
        if (name == n) {
          gates.push_back(Gate::single(k, index(m[2]), 0));
          found = true;
          break;
        }
      }
      if (!found) throw QasmParseError(line_no, "unsupported gate '" + name + "'");
      continue;
    }
    const std::string token = line.substr(0, line.find_first_of(" \t(;"));
    throw QasmParseError(line_no, "unsupported statement '" + token + "'");
  }
  if (!seen_header) throw QasmParseError(line_no, "missing 'OPENQASM 2.0;' header");
  if (n_qubits < 0) throw QasmParseError(line_no, "missing qreg declaration");

  Circuit c(n_qubits);
  for (const Gate& g : gates) c.add(Gate{g.kind, static_cast<int>(c.gates().size()), g.qubit, g.target, g.angle});
  for (int q : measured) c.measure(q, static_cast<int>(gates.size()));
  return asap(c);
}

}  // namespace lgtest::gateset
