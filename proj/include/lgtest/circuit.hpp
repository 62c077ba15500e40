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
 * Time-slotted circuit grid and device-constraint validation.
 *
 * A circuit is a grid of (qubit, slot) cells. Each cell holds at most one
 * gate; a CNOT occupies the same slot on both operands. Measurements are
 * terminal z-measurements recorded with the slot at which they happen.
 */

#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "lgtest/error.hpp"
#include "lgtest/qsim.hpp"

namespace lgtest::gateset {

/// RX is an arbitrary x rotation used only by the ideal gate set.
enum class GateKind { X, Y, Z, H, S, Sdg, T, Tdg, Id, CNOT, RX };

inline std::string to_string(GateKind k) {
  switch (k) {
    case GateKind::X: return "x";
    case GateKind::Y: return "y";
    case GateKind::Z: return "z";
    case GateKind::H: return "h";
    case GateKind::S: return "s";
    case GateKind::Sdg: return "sdg";
    case GateKind::T: return "t";
    case GateKind::Tdg: return "tdg";
    case GateKind::Id: return "id";
    case GateKind::CNOT: return "cx";
    case GateKind::RX: return "rx";
  }
  return "?";
}

/// Gates that are frame/timing operations with no physical pulse.
inline bool is_timing_only(GateKind k) {
  return k == GateKind::T || k == GateKind::Tdg || k == GateKind::Id;
}

struct Gate {
  GateKind kind = GateKind::Id;
  int slot = 0;
  int qubit = 0;      // the operand, or the control of a CNOT
  int target = -1;    // CNOT only
  double angle = 0.0; // RX only

  static Gate single(GateKind kind, int qubit, int slot) {
    if (kind == GateKind::CNOT) throw ValidationError("CNOT needs two operands");
    return Gate{kind, slot, qubit, -1, 0.0};
  }
  static Gate cnot(int control, int target, int slot) {
    if (control == target) throw ValidationError("CNOT control equals target");
    return Gate{GateKind::CNOT, slot, control, target, 0.0};
  }
  static Gate rx(double angle, int qubit, int slot) { return Gate{GateKind::RX, slot, qubit, -1, angle}; }

  bool is_two_qubit() const { return kind == GateKind::CNOT; }
  bool acts_on(int q) const { return qubit == q || (is_two_qubit() && target == q); }

  qsim::Mat2 matrix() const {
    using namespace qsim::gates;
    switch (kind) {
      case GateKind::X: return X();
      case GateKind::Y: return Y();
      case GateKind::Z: return Z();
      case GateKind::H: return H();
      case GateKind::S: return S();
      case GateKind::Sdg: return Sdg();
      case GateKind::T: return T();
      case GateKind::Tdg: return Tdg();
      case GateKind::Id: return I();
      case GateKind::RX: return Rx(angle);
      case GateKind::CNOT: break;
    }
    throw ValidationError("matrix() called on a two-qubit gate");
  }

  std::string describe() const {
    std::string s = to_string(kind);
    if (kind == GateKind::RX) s += "(" + std::to_string(angle) + ")";
    s += " q" + std::to_string(qubit);
    if (is_two_qubit()) s += ",q" + std::to_string(target);
    s += " @" + std::to_string(slot);
    return s;
  }

  friend bool operator==(const Gate&, const Gate&) = default;
};

struct Measurement {
  int qubit = 0;
  int slot = 0;
  friend bool operator==(const Measurement&, const Measurement&) = default;
};

class Circuit {
 public:
  explicit Circuit(int n_qubits = 5) : n_(n_qubits) {
    if (n_qubits < 1 || n_qubits > qsim::kMaxQubits) throw ValidationError("circuit qubit count out of range");
  }

  int n_qubits() const { return n_; }
  const std::vector<Gate>& gates() const { return gates_; }
  const std::vector<Measurement>& measurements() const { return measurements_; }
  bool empty() const { return gates_.empty() && measurements_.empty(); }

  /// Places a gate; throws if a cell is taken or an operand is out of range.
  Circuit& add(const Gate& g) {
    if (g.slot < 0) throw ValidationError("negative slot in " + g.describe());
    check_qubit(g.qubit);
    if (g.is_two_qubit()) {
      check_qubit(g.target);
      if (g.target == g.qubit) throw ValidationError("CNOT control equals target");
    }
    if (occupied(g.qubit, g.slot) || (g.is_two_qubit() && occupied(g.target, g.slot)))
      throw ValidationError("cell already occupied by another gate: " + g.describe());
    gates_.push_back(g);
    normalize();
    return *this;
  }

  Circuit& add(GateKind kind, int qubit, int slot) { return add(Gate::single(kind, qubit, slot)); }
  Circuit& cnot(int control, int target, int slot) { return add(Gate::cnot(control, target, slot)); }
  Circuit& rx(double angle, int qubit, int slot) { return add(Gate::rx(angle, qubit, slot)); }

  Circuit& measure(int qubit, int slot) {
    check_qubit(qubit);
    if (slot < 0) throw ValidationError("negative measurement slot");
    measurements_.push_back({qubit, slot});
    normalize();
    return *this;
  }

  const Gate* at(int qubit, int slot) const {
    for (const Gate& g : gates_)
      if (g.slot == slot && g.acts_on(qubit)) return &g;
    return nullptr;
  }
  bool occupied(int qubit, int slot) const { return at(qubit, slot) != nullptr; }

  /// Gates touching qubit q, in slot order.
  std::vector<Gate> qubit_gates(int q) const {
    std::vector<Gate> out;
    for (const Gate& g : gates_)
      if (g.acts_on(q)) out.push_back(g);
    return out;
  }

  std::optional<int> measurement_slot(int q) const {
    for (const Measurement& m : measurements_)
      if (m.qubit == q) return m.slot;
    return std::nullopt;
  }

  bool is_measured(int q) const { return measurement_slot(q).has_value(); }

  std::vector<int> measured_qubits() const {
    std::set<int> qs;
    for (const Measurement& m : measurements_) qs.insert(m.qubit);
    return {qs.begin(), qs.end()};
  }

  /// Number of slots spanned, including measurement slots.
  int depth() const {
    int d = 0;
    for (const Gate& g : gates_) d = std::max(d, g.slot + 1);
    for (const Measurement& m : measurements_) d = std::max(d, m.slot + 1);
    return d;
  }

  /// Removes the gate occupying (qubit, slot). Returns false if the cell was empty.
  bool remove_at(int qubit, int slot) {
    auto it = std::find_if(gates_.begin(), gates_.end(),
                           [&](const Gate& g) { return g.slot == slot && g.acts_on(qubit); });
    if (it == gates_.end()) return false;
    gates_.erase(it);
    return true;
  }

  void remove_measurement(int qubit) {
    std::erase_if(measurements_, [&](const Measurement& m) { return m.qubit == qubit; });
  }

  /// Moves the single-qubit gate at (qubit, from) to slot `to`; the target cell must be free.
  void move_gate(int qubit, int from, int to) {
    auto it = std::find_if(gates_.begin(), gates_.end(),
                           [&](const Gate& g) { return g.slot == from && g.acts_on(qubit); });
    if (it == gates_.end() || it->is_two_qubit()) throw ValidationError("no movable gate at cell");
    if (occupied(qubit, to)) throw ValidationError("destination cell occupied");
    it->slot = to;
    normalize();
  }

  friend bool operator==(const Circuit&, const Circuit&) = default;

 private:
  void check_qubit(int q) const {
    if (q < 0 || q >= n_) throw ValidationError("qubit " + std::to_string(q) + " out of range");
  }

  void normalize() {
    std::sort(gates_.begin(), gates_.end(), [](const Gate& a, const Gate& b) {
      return std::tie(a.slot, a.qubit) < std::tie(b.slot, b.qubit);
    });
    std::sort(measurements_.begin(), measurements_.end(), [](const Measurement& a, const Measurement& b) {
      return std::tie(a.slot, a.qubit) < std::tie(b.slot, b.qubit);
    });
  }

  int n_;
  std::vector<Gate> gates_;
  std::vector<Measurement> measurements_;
};

/// As-soon-as-possible rescheduling: every gate is placed at the earliest slot
/// after the previous gates on its operands, preserving per-qubit order and
/// CNOT alignment. All measurements land on one common slot after the last gate.
inline Circuit asap(const Circuit& c) {
  Circuit out(c.n_qubits());
  std::vector<int> next(static_cast<std::size_t>(c.n_qubits()), 0);
  for (Gate g : c.gates()) {
    int slot = next[static_cast<std::size_t>(g.qubit)];
    if (g.is_two_qubit()) slot = std::max(slot, next[static_cast<std::size_t>(g.target)]);
    g.slot = slot;
    out.add(g);
    next[static_cast<std::size_t>(g.qubit)] = slot + 1;
    if (g.is_two_qubit()) next[static_cast<std::size_t>(g.target)] = slot + 1;
  }
  const int end = *std::max_element(next.begin(), next.end());
  for (const Measurement& m : c.measurements()) out.measure(m.qubit, end);
  return out;
}

struct DeviceConstraints {
  int n_qubits = 5;
  int cnot_target = 2;
  std::set<GateKind> allowed_kinds{GateKind::X, GateKind::Y,   GateKind::Z,  GateKind::H,
                                   GateKind::S, GateKind::Sdg, GateKind::T,  GateKind::Tdg,
                                   GateKind::Id, GateKind::CNOT};
  int max_measurements_per_qubit = 1;

  /// The five-qubit device: CNOTs must target Q2, one measurement per qubit.
  static DeviceConstraints device() { return {}; }

  /// The device rules plus arbitrary x rotations.
  static DeviceConstraints ideal() {
    DeviceConstraints d;
    d.allowed_kinds.insert(GateKind::RX);
    return d;
  }
};

struct Violation {
  std::string rule;  // "cnot_target", "gate_kind", "max_measurements", "measurement_terminal", "qubit_count"
  std::string gate;  // description of the offending gate, empty for measurement rules
  int qubit = -1;
  int slot = -1;
};

/// Empty result iff the circuit is legal on `d`.
inline std::vector<Violation> validate(const Circuit& c, const DeviceConstraints& d) {
  std::vector<Violation> out;
  if (c.n_qubits() > d.n_qubits)
    out.push_back({"qubit_count", "", c.n_qubits(), -1});
  for (const Gate& g : c.gates()) {
    if (!d.allowed_kinds.contains(g.kind)) out.push_back({"gate_kind", g.describe(), g.qubit, g.slot});
    if (g.is_two_qubit() && g.target != d.cnot_target)
      out.push_back({"cnot_target", g.describe(), g.target, g.slot});
  }
  for (int q = 0; q < c.n_qubits(); ++q) {
    int count = 0;
    int first = -1;
    for (const Measurement& m : c.measurements()) {
      if (m.qubit != q) continue;
      ++count;
      if (first < 0 || m.slot < first) first = m.slot;
      if (count > d.max_measurements_per_qubit) out.push_back({"max_measurements", "", q, m.slot});
    }
    if (first < 0) continue;
    for (const Gate& g : c.qubit_gates(q))
      if (g.slot >= first) out.push_back({"measurement_terminal", g.describe(), q, g.slot});
  }
  return out;
}

}  // namespace lgtest::gateset
