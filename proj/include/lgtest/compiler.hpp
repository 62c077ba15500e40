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
 * Emulation of the two peephole behaviors of the device compiler, and the
 * countermeasures that neutralize them.
 *
 *  - HH collapse: two H gates on a qubit with only empty cells between them
 *    are deleted.
 *  - Hoisting: the last pulse gate on a measured qubit, if only empty cells
 *    follow it, is moved to the slot right before the measurement.
 *
 * A T, Tdg spacer between an H pair defeats the collapse; Id gates filling the
 * cells before a measurement defeat the hoist.
 */

#pragma once

#include <string>
#include <vector>

#include "lgtest/circuit.hpp"

namespace lgtest::gateset {

inline Circuit pass_collapse_hh(Circuit c) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (int q = 0; q < c.n_qubits() && !changed; ++q) {
      const auto seq = c.qubit_gates(q);
      for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
        if (seq[i].kind == GateKind::H && seq[i + 1].kind == GateKind::H) {
          c.remove_at(q, seq[i].slot);
          c.remove_at(q, seq[i + 1].slot);
          changed = true;
          break;
        }
      }
    }
  }
  return c;
}

inline Circuit pass_hoist(Circuit c) {
  for (int q = 0; q < c.n_qubits(); ++q) {
    const auto meas = c.measurement_slot(q);
    if (!meas) continue;
    const Gate* last = nullptr;
    for (const Gate& g : c.gates())
      if (g.acts_on(q) && g.slot < *meas) last = &g;
    if (last == nullptr || last->is_two_qubit() || last->kind == GateKind::Id) continue;
    if (last->slot + 1 < *meas) c.move_gate(q, last->slot, *meas - 1);
  }
  return c;
}

/// Collapse then hoist, alternated until nothing changes. Terminates because
/// collapse strictly lowers the gate count and hoist strictly raises the sum
/// of gate slots, which is bounded by the measurement slots.
inline Circuit compile(Circuit c) {
  while (true) {
    Circuit next = pass_hoist(pass_collapse_hh(c));
    if (next == c) return c;
    c = std::move(next);
  }
}

/// An H pair at (qubit, first) and (qubit, second) that must survive compilation.
struct HHSite {
  int qubit = 0;
  int first = 0;
  int second = 0;
};

/// Cells [first, last] on `qubit` to fill with Id.
struct PinWindow {
  int qubit = 0;
  int first = 0;
  int last = 0;
};

inline std::string describe(const HHSite& s) {
  return "HH site q" + std::to_string(s.qubit) + " slots " + std::to_string(s.first) + "," +
         std::to_string(s.second);
}

inline std::string describe(const PinWindow& w) {
  return "pin window q" + std::to_string(w.qubit) + " slots " + std::to_string(w.first) + ".." +
         std::to_string(w.last);
}

/// Inserts T, Tdg into the last two interior cells of each protected H pair
/// and fills every empty cell of each pin window with Id.
inline Circuit insert_countermeasures(Circuit c, const std::vector<HHSite>& protect,
                                      const std::vector<PinWindow>& pin) {
  for (const HHSite& s : protect) {
    const Gate* a = c.at(s.qubit, s.first);
    const Gate* b = c.at(s.qubit, s.second);
    if (a == nullptr || b == nullptr || a->kind != GateKind::H || b->kind != GateKind::H || s.second <= s.first)
      throw ValidationError("no H pair at " + describe(s));
    for (int slot = s.first + 1; slot < s.second; ++slot)
      if (c.occupied(s.qubit, slot)) throw ValidationError("gates between the H pair at " + describe(s));
    if (s.second - s.first - 1 < 2) throw ValidationError("no room for T,Tdg at " + describe(s));
    c.add(GateKind::T, s.qubit, s.second - 2);
    c.add(GateKind::Tdg, s.qubit, s.second - 1);
  }
  for (const PinWindow& w : pin) {
    int filled = 0;
    for (int slot = w.first; slot <= w.last; ++slot) {
      if (c.occupied(w.qubit, slot)) continue;
      c.add(GateKind::Id, w.qubit, slot);
      ++filled;
    }
    if (filled == 0) throw ValidationError("no free cell in " + describe(w));
  }
  return c;
}

}  // namespace lgtest::gateset
