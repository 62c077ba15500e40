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
 * The six Leggett-Garg protocol circuits.
 *
 * The system qubit is Q2. Its measurement sequence has six positions that
 * alternate theta, z, theta, z, theta, z:
 *
 *   position 1  O1  initialization into |1>_theta (X, then the rotation R)
 *   position 2  O2  z copy onto an ancilla
 *   position 3      theta copy (R^dagger, z copy, R)
 *   position 4      z copy
 *   position 5      theta copy
 *   position 6  O3  terminal z measurement of Q2
 *
 * Protocol A keeps only positions 1 and 6, B..E add one of positions 2..5,
 * and F has all of them. Every position owns a fixed slot window, so B..E
 * are slot-exact subsets of F.
 *
 * A z copy is CNOT(Q2 -> ancilla) written as H-conjugated CNOT(ancilla -> Q2)
 * because the device only allows Q2 as a CNOT target.
 */

#pragma once

#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "lgtest/circuit.hpp"
#include "lgtest/compiler.hpp"
#include "lgtest/qsim.hpp"

namespace lgtest::protocols {

using gateset::Circuit;
using gateset::Gate;
using gateset::GateKind;

enum class ProtocolId { A, B, C, D, E, F };

inline constexpr std::array<ProtocolId, 6> kAllProtocols{ProtocolId::A, ProtocolId::B, ProtocolId::C,
                                                          ProtocolId::D, ProtocolId::E, ProtocolId::F};

inline std::string to_string(ProtocolId id) { return std::string(1, static_cast<char>('a' + static_cast<int>(id))); }

inline ProtocolId parse_protocol_id(const std::string& s) {
  if (s.size() == 1) {
    const char c = static_cast<char>(s[0] | 0x20);
    if (c >= 'a' && c <= 'f') return static_cast<ProtocolId>(c - 'a');
  }
  throw ValidationError("unknown protocol id '" + s + "' (expected one of a..f)");
}

enum class GatesetMode { Device, Ideal };

inline std::string to_string(GatesetMode m) { return m == GatesetMode::Device ? "device" : "ideal"; }

/// Measurement roles, numbered by sequence position.
enum class Role { O1 = 1, O2 = 2, M3 = 3, M4 = 4, M5 = 5, O3 = 6 };

inline std::string to_string(Role r) {
  switch (r) {
    case Role::O1: return "O1";
    case Role::O2: return "O2";
    case Role::M3: return "M3";
    case Role::M4: return "M4";
    case Role::M5: return "M5";
    case Role::O3: return "O3";
  }
  return "?";
}

inline constexpr int kSystemQubit = 2;
inline constexpr double kDeviceTheta = -3.0 * std::numbers::pi / 4.0;

/// Ancilla qubit for each intermediate position.
struct AncillaAssignment {
  int pos2 = 1;
  int pos3 = 0;
  int pos4 = 4;
  int pos5 = 3;

  int at(int position) const {
    switch (position) {
      case 2: return pos2;
      case 3: return pos3;
      case 4: return pos4;
      case 5: return pos5;
    }
    throw ValidationError("no ancilla for position " + std::to_string(position));
  }
};

enum class Basis { Z, Theta };

/// Intermediate positions present in each protocol.
inline std::vector<int> intermediate_positions(ProtocolId id) {
  switch (id) {
    case ProtocolId::A: return {};
    case ProtocolId::B: return {2};
    case ProtocolId::C: return {3};
    case ProtocolId::D: return {4};
    case ProtocolId::E: return {5};
    case ProtocolId::F: return {2, 3, 4, 5};
  }
  return {};
}

inline Basis position_basis(int position) { return position % 2 == 0 ? Basis::Z : Basis::Theta; }

/// Slot window owned by one intermediate position on the system qubit.
struct MeasurementSite {
  int position = 0;
  Basis basis = Basis::Z;
  int ancilla = -1;
  int first_slot = 0;  // inclusive, includes the T,Tdg guard cells
  int last_slot = 0;   // inclusive
  int cnot_slot = 0;
};

/// O1 as initialization: X then the rotation taking |1> to |1>_theta.
struct Initialization {
  int qubit = kSystemQubit;
  double theta = kDeviceTheta;
};

using RoleMap = std::map<Role, int>;

struct ProtocolCircuit {
  ProtocolId id = ProtocolId::A;
  double theta = kDeviceTheta;
  GatesetMode mode = GatesetMode::Device;
  Circuit circuit;      // countermeasures applied
  Circuit unprotected;  // same circuit before countermeasures
  RoleMap roles;        // O2..M5, O3 -> measured qubit
  std::vector<MeasurementSite> sites;
  Initialization o1;
  std::vector<gateset::HHSite> protected_pairs;
  std::vector<gateset::PinWindow> pins;

  const MeasurementSite* site(int position) const {
    for (const auto& s : sites)
      if (s.position == position) return &s;
    return nullptr;
  }
};

namespace detail {

struct SeqGate {
  GateKind kind;
  double angle = 0.0;
};

inline bool is_device_theta(double theta) { return std::abs(theta - kDeviceTheta) <= 1e-12; }

/// Rotation R with R sigma_z R^dagger = sigma_theta, in time order.
/// Device: the matrix H T H Sdg H, i.e. H, Sdg, H, T, H applied left to right.
inline std::vector<SeqGate> rotation(double theta, GatesetMode mode) {
  if (mode == GatesetMode::Device)
    return {{GateKind::H}, {GateKind::Sdg}, {GateKind::H}, {GateKind::T}, {GateKind::H}};
  return {{GateKind::RX, -theta}};
}

inline std::vector<SeqGate> rotation_dagger(double theta, GatesetMode mode) {
  if (mode == GatesetMode::Device)
    return {{GateKind::H}, {GateKind::Tdg}, {GateKind::H}, {GateKind::S}, {GateKind::H}};
  return {{GateKind::RX, theta}};
}

/// Drops adjacent H,H pairs (the collapse the protocols rely on inside theta copies).
inline std::vector<SeqGate> cancel_hh(const std::vector<SeqGate>& in) {
  std::vector<SeqGate> out;
  for (const SeqGate& g : in) {
    if (g.kind == GateKind::H && !out.empty() && out.back().kind == GateKind::H) {
      out.pop_back();
      continue;
    }
    out.push_back(g);
  }
  return out;
}

/// System-qubit content of an intermediate window; CNOT marks the copy.
inline std::vector<SeqGate> window_content(Basis basis, double theta, GatesetMode mode) {
  const std::vector<SeqGate> copy{{GateKind::H}, {GateKind::CNOT}, {GateKind::H}};
  if (basis == Basis::Z) return copy;
  std::vector<SeqGate> seq = rotation_dagger(theta, mode);
  seq.insert(seq.end(), copy.begin(), copy.end());
  const auto r = rotation(theta, mode);
  seq.insert(seq.end(), r.begin(), r.end());
  return cancel_hh(seq);
}

inline void place(Circuit& c, const SeqGate& g, int qubit, int slot) {
  if (g.kind == GateKind::RX)
    c.rx(g.angle, qubit, slot);
  else
    c.add(g.kind, qubit, slot);
}

/// Id-fills every measured qubit's empty cells between its last gate and its measurement.
inline std::vector<gateset::PinWindow> tail_pins(const Circuit& c) {
  std::vector<gateset::PinWindow> pins;
  for (int q : c.measured_qubits()) {
    const int meas = *c.measurement_slot(q);
    int last = -1;
    for (const Gate& g : c.qubit_gates(q))
      if (g.slot < meas) last = g.slot;
    if (last + 1 <= meas - 1) pins.push_back({q, last + 1, meas - 1});
  }
  return pins;
}

}  // namespace detail

/// Slot layout shared by all protocols of one (theta, mode).
struct Layout {
  int rotation_first = 1;
  int rotation_len = 0;
  std::array<MeasurementSite, 4> windows{};  // positions 2..5
  int measure_slot = 0;
  bool guarded = false;
};

inline Layout layout(double theta, GatesetMode mode, const AncillaAssignment& anc = {}) {
  Layout l;
  l.rotation_len = static_cast<int>(detail::rotation(theta, mode).size());
  l.guarded = mode == GatesetMode::Device;
  int cursor = l.rotation_first + l.rotation_len;
  for (int pos = 2; pos <= 5; ++pos) {
    const Basis basis = position_basis(pos);
    const auto content = detail::window_content(basis, theta, mode);
    const int guard = l.guarded ? 2 : 0;
    int cnot_offset = 0;
    while (content[static_cast<std::size_t>(cnot_offset)].kind != GateKind::CNOT) ++cnot_offset;
    MeasurementSite& w = l.windows[static_cast<std::size_t>(pos - 2)];
    w.position = pos;
    w.basis = basis;
    w.ancilla = anc.at(pos);
    w.first_slot = cursor;
    w.last_slot = cursor + guard + static_cast<int>(content.size()) - 1;
    w.cnot_slot = cursor + guard + cnot_offset;
    cursor = w.last_slot + 1;
  }
  l.measure_slot = cursor;
  return l;
}

/// Builds the circuit for the given set of intermediate positions.
inline ProtocolCircuit build_positions(ProtocolId id, const std::vector<int>& positions, double theta,
                                       GatesetMode mode, const AncillaAssignment& anc = {}) {
  if (mode == GatesetMode::Device && !detail::is_device_theta(theta))
    throw ValidationError("device gate set only realizes theta = -3pi/4; use the ideal gate set for theta = " +
                          std::to_string(theta));
  std::map<int, int> seen;
  for (int p : positions) {
    if (p < 2 || p > 5) throw ValidationError("intermediate position must be 2..5");
    const int a = anc.at(p);
    if (a == kSystemQubit || a < 0 || a >= qsim::kMaxQubits) throw ValidationError("bad ancilla qubit");
    if (seen.contains(a)) throw ValidationError("two positions share ancilla q" + std::to_string(a));
    seen[a] = p;
  }

  const Layout l = layout(theta, mode, anc);
  ProtocolCircuit pc;
  pc.id = id;
  pc.theta = theta;
  pc.mode = mode;
  pc.o1 = {kSystemQubit, theta};

  Circuit raw(qsim::kMaxQubits);
  const int sys = kSystemQubit;
  raw.add(GateKind::X, sys, 0);
  {
    int slot = l.rotation_first;
    for (const auto& g : detail::rotation(theta, mode)) detail::place(raw, g, sys, slot++);
  }

  std::vector<gateset::HHSite> protect;
  for (int pos : positions) {
    MeasurementSite w = l.windows[static_cast<std::size_t>(pos - 2)];
    const auto content = detail::window_content(w.basis, theta, mode);
    int slot = w.first_slot + (l.guarded ? 2 : 0);
    for (const auto& g : content) {
      if (g.kind == GateKind::CNOT)
        raw.cnot(w.ancilla, sys, slot);
      else
        detail::place(raw, g, sys, slot);
      ++slot;
    }
    raw.add(GateKind::H, w.ancilla, w.cnot_slot - 1);
    raw.add(GateKind::H, w.ancilla, w.cnot_slot + 1);
    raw.measure(w.ancilla, l.measure_slot);
    pc.sites.push_back(w);
    pc.roles[static_cast<Role>(pos)] = w.ancilla;
  }
  raw.measure(sys, l.measure_slot);
  pc.roles[Role::O3] = sys;

  if (l.guarded) {
    // Every window starts with H and every predecessor on Q2 ends with H.
    for (const auto& w : pc.sites) {
      int prev = -1;
      for (const Gate& g : raw.qubit_gates(sys))
        if (g.slot < w.first_slot) prev = g.slot;
      const int first = w.first_slot + 2;
      if (raw.at(sys, prev)->kind != GateKind::H || raw.at(sys, first)->kind != GateKind::H)
        throw InvariantError("guarded window is not an H pair");
      protect.push_back({sys, prev, first});
    }
  }

  pc.unprotected = raw;
  pc.protected_pairs = protect;
  pc.pins = detail::tail_pins(raw);
  pc.circuit = gateset::insert_countermeasures(raw, protect, pc.pins);

  const auto constraints =
      mode == GatesetMode::Device ? gateset::DeviceConstraints::device() : gateset::DeviceConstraints::ideal();
  const auto violations = gateset::validate(pc.circuit, constraints);
  if (!violations.empty())
    throw InvariantError("protocol " + to_string(id) + " violates " + violations.front().rule);
  if (gateset::compile(pc.circuit) != pc.circuit)
    throw InvariantError("protocol " + to_string(id) + " is not a compile fixpoint");
  return pc;
}

inline ProtocolCircuit build_protocol(ProtocolId id, double theta = kDeviceTheta,
                                      GatesetMode mode = GatesetMode::Device, const AncillaAssignment& anc = {}) {
  return build_positions(id, intermediate_positions(id), theta, mode, anc);
}

/// F with every intermediate outside `keep` deleted: its window gates, its
/// ancilla and its measurement are removed, and measured qubits are re-padded
/// with Id up to the measurement.
inline Circuit restrict_to(const ProtocolCircuit& f, const std::vector<int>& keep) {
  Circuit c = f.circuit;
  for (const auto& w : f.sites) {
    if (std::find(keep.begin(), keep.end(), w.position) != keep.end()) continue;
    for (int slot = w.first_slot; slot <= w.last_slot; ++slot) c.remove_at(kSystemQubit, slot);
    for (const Gate& g : c.qubit_gates(w.ancilla)) c.remove_at(w.ancilla, g.slot);
    c.remove_measurement(w.ancilla);
  }
  return gateset::insert_countermeasures(c, {}, detail::tail_pins(c));
}

/// One distinct outcome with its +/-1 values by position (index 1..6; 0 = not measured).
struct OutcomeRow {
  std::array<int, 7> value{};
  std::uint64_t count = 0;

  int operator[](Role r) const { return value[static_cast<std::size_t>(r)]; }
};

/// Maps outcome strings to role values: bit 1 -> +1, bit 0 -> -1. O1 is +1.
inline std::vector<OutcomeRow> outcomes(const qsim::Counts& counts, const RoleMap& roles) {
  std::vector<OutcomeRow> rows;
  rows.reserve(counts.size());
  for (const auto& [outcome, n] : counts) {
    OutcomeRow row;
    row.count = n;
    row.value[static_cast<std::size_t>(Role::O1)] = 1;
    for (const auto& [role, q] : roles)
      row.value[static_cast<std::size_t>(role)] = qsim::outcome_bit(outcome, q) == 1 ? 1 : -1;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace lgtest::protocols
