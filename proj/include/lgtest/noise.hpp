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
 * Imperfection channels and their attachment to a circuit.
 *
 * A NoisyProgram is the flat, slot-ordered list of operators (gate unitaries,
 * Kraus channels, the optional invasiveness kick) that a simulator executes,
 * plus per-qubit readout flip probabilities.
 */

#pragma once

#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "lgtest/circuit.hpp"
#include "lgtest/protocols.hpp"
#include "lgtest/qsim.hpp"

namespace lgtest::noise {

using gateset::Circuit;
using gateset::GateKind;

/// Unitary x rotation on the system qubit right after the intermediate at `position`.
struct Kick {
  int position = 2;
  double angle = 0.0;
};

struct NoiseModel {
  double p1 = 0.0;          // depolarizing, per pulse single-qubit gate
  double p2 = 0.0;          // two-qubit depolarizing, per CNOT
  double eps_ro = 0.0;      // readout flip, per measured qubit
  double gamma_idle = 0.0;  // amplitude damping, per idle cell
  std::map<int, double> eps_ro_qubit;  // overrides eps_ro for specific qubits
  std::optional<Kick> kick;

  double readout_error(int q) const {
    auto it = eps_ro_qubit.find(q);
    return it == eps_ro_qubit.end() ? eps_ro : it->second;
  }

  bool has_channels() const {
    if (p1 > 0 || p2 > 0 || eps_ro > 0 || gamma_idle > 0) return true;
    for (const auto& [q, e] : eps_ro_qubit)
      if (e > 0) return true;
    return false;
  }

  void validate() const {
    auto prob = [](double p, const char* name) {
      if (!(p >= 0.0 && p <= 1.0)) throw ValidationError(std::string(name) + " must lie in [0, 1]");
    };
    prob(p1, "p1");
    prob(p2, "p2");
    prob(eps_ro, "eps_ro");
    prob(gamma_idle, "gamma_idle");
    for (const auto& [q, e] : eps_ro_qubit) prob(e, "eps_ro override");
    if (kick) {
      if (!(std::abs(kick->angle) <= std::numbers::pi)) throw ValidationError("kick angle must lie in [-pi, pi]");
      if (kick->position < 2 || kick->position > 5) throw ValidationError("kick position must be 2..5");
    }
  }
};

/// Attaches an x kick of angle kappa to O2's copy (position 2), in every
/// protocol that contains it.
inline NoiseModel invasive_o2(NoiseModel model, double kappa) {
  model.kick = Kick{2, kappa};
  return model;
}

// ---------------------------------------------------------------------------
// Kraus families

using KrausSet = std::vector<std::vector<cplx>>;

inline std::vector<cplx> flat(const qsim::Mat2& m) { return {m.begin(), m.end()}; }

/// rho -> (1 - p) rho + p I/2
inline KrausSet depolarizing_1q(double p) {
  using namespace qsim::gates;
  const double a = std::sqrt(1.0 - 0.75 * p), b = std::sqrt(p / 4.0);
  return {flat(qsim::scale(a, I())), flat(qsim::scale(b, X())), flat(qsim::scale(b, Y())), flat(qsim::scale(b, Z()))};
}

/// rho -> (1 - p) rho + p I/4 (on the pair)
inline KrausSet depolarizing_2q(double p) {
  using namespace qsim::gates;
  const std::array<qsim::Mat2, 4> paulis{I(), X(), Y(), Z()};
  KrausSet out;
  for (std::size_t j = 0; j < 4; ++j) {
    for (std::size_t i = 0; i < 4; ++i) {
      const double w = (i == 0 && j == 0) ? std::sqrt(1.0 - 15.0 * p / 16.0) : std::sqrt(p / 16.0);
      // local index = bit_a + 2 * bit_b, operator = paulis[j] (b) x paulis[i] (a)
      std::vector<cplx> m(16);
      for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c)
          m[r * 4 + c] = w * paulis[i][(r & 1) * 2 + (c & 1)] * paulis[j][(r >> 1) * 2 + (c >> 1)];
      out.push_back(std::move(m));
    }
  }
  return out;
}

/// Decay |1> -> |0> with probability gamma.
inline KrausSet amplitude_damping(double gamma) {
  return {{1.0, 0.0, 0.0, std::sqrt(1.0 - gamma)}, {0.0, std::sqrt(gamma), 0.0, 0.0}};
}

/// max |sum K^dagger K - I|, for channel validity checks.
inline double completeness_error(const KrausSet& kraus) {
  if (kraus.empty()) return 1.0;
  const std::size_t d = static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(kraus[0].size()))));
  double worst = 0.0;
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) {
      cplx acc = 0.0;
      for (const auto& k : kraus)
        for (std::size_t m = 0; m < d; ++m) acc += std::conj(k[m * d + r]) * k[m * d + c];
      worst = std::max(worst, std::abs(acc - (r == c ? 1.0 : 0.0)));
    }
  return worst;
}

// ---------------------------------------------------------------------------
// Programs

struct Step {
  std::vector<int> qubits;
  KrausSet kraus;  // one operator for unitaries
  bool unitary = true;
  int slot = 0;
  std::string label;
};

struct NoisyProgram {
  int n_qubits = 5;
  std::vector<Step> steps;
  std::vector<int> measured;
  std::vector<double> readout_flip;  // per qubit; only measured entries matter

  bool is_unitary() const {
    for (const auto& s : steps)
      if (!s.unitary) return false;
    for (int q : measured)
      if (readout_flip[static_cast<std::size_t>(q)] > 0) return false;
    return true;
  }
};

/// Where a kick goes: after the system-qubit gate at `after_slot`.
struct KickSite {
  int qubit = protocols::kSystemQubit;
  int after_slot = 0;
};

inline NoisyProgram apply_noise(const Circuit& c, const NoiseModel& model,
                                std::optional<KickSite> kick_site = std::nullopt) {
  model.validate();
  if (model.kick && !kick_site)
    throw ValidationError("kick names intermediate position " + std::to_string(model.kick->position) +
                          ", which is absent from the circuit");

  NoisyProgram prog;
  prog.n_qubits = c.n_qubits();
  prog.measured = c.measured_qubits();
  prog.readout_flip.assign(static_cast<std::size_t>(c.n_qubits()), 0.0);
  for (int q : prog.measured) prog.readout_flip[static_cast<std::size_t>(q)] = model.readout_error(q);

  const int depth = c.depth();
  for (int slot = 0; slot < depth; ++slot) {
    std::vector<Step> errors;
    for (const auto& g : c.gates()) {
      if (g.slot != slot) continue;
      if (g.is_two_qubit()) {
        const auto m = qsim::gates::CNOT();
        prog.steps.push_back({{g.qubit, g.target}, {std::vector<cplx>(m.begin(), m.end())}, true, slot, g.describe()});
        if (model.p2 > 0) errors.push_back({{g.qubit, g.target}, depolarizing_2q(model.p2), false, slot, "depol2"});
      } else {
        prog.steps.push_back({{g.qubit}, {flat(g.matrix())}, true, slot, g.describe()});
        if (model.p1 > 0 && !gateset::is_timing_only(g.kind))
          errors.push_back({{g.qubit}, depolarizing_1q(model.p1), false, slot, "depol1"});
      }
    }
    for (auto& e : errors) prog.steps.push_back(std::move(e));
    if (model.kick && kick_site->after_slot == slot)
      prog.steps.push_back({{kick_site->qubit}, {flat(qsim::gates::Rx(model.kick->angle))}, true, slot, "kick"});
    if (model.gamma_idle > 0) {
      for (int q = 0; q < c.n_qubits(); ++q) {
        const auto meas = c.measurement_slot(q);
        if (meas && slot >= *meas) continue;
        const auto* g = c.at(q, slot);
        if (g == nullptr || gateset::is_timing_only(g->kind))
          prog.steps.push_back({{q}, amplitude_damping(model.gamma_idle), false, slot, "idle"});
      }
    }
  }
  return prog;
}

/// Resolves the model's kick against the protocol's intermediate windows.
inline NoisyProgram apply_noise(const protocols::ProtocolCircuit& pc, const NoiseModel& model) {
  std::optional<KickSite> site;
  if (model.kick) {
    if (const auto* w = pc.site(model.kick->position)) site = KickSite{protocols::kSystemQubit, w->last_slot};
  }
  return apply_noise(pc.circuit, model, site);
}

/// Applies readout flips of the measured qubits and folds unmeasured qubits
/// into bit value 0.
inline std::vector<double> apply_readout(std::vector<double> p, const NoisyProgram& prog) {
  for (int q : prog.measured) {
    const double e = prog.readout_flip[static_cast<std::size_t>(q)];
    if (e <= 0) continue;
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (i & bit) continue;
      const double p0 = p[i], p1 = p[i | bit];
      p[i] = (1 - e) * p0 + e * p1;
      p[i | bit] = e * p0 + (1 - e) * p1;
    }
  }
  std::size_t keep = 0;
  for (int q : prog.measured) keep |= std::size_t{1} << q;
  std::vector<double> out(p.size(), 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) out[i & keep] += p[i];
  return out;
}

/// Outcome distribution over basis indices (unmeasured bits reported as 0).
inline std::vector<double> outcome_distribution(const NoisyProgram& prog) {
  std::vector<double> p;
  if (prog.is_unitary()) {
    qsim::StateVector sv(prog.n_qubits);
    for (const auto& s : prog.steps) sv.apply_matrix(s.qubits, s.kraus.front());
    p = sv.probabilities();
  } else {
    qsim::DensityMatrix dm(prog.n_qubits);
    for (const auto& s : prog.steps) dm.apply_kraus(s.qubits, s.kraus);
    p = dm.probabilities();
  }
  return apply_readout(std::move(p), prog);
}

}  // namespace lgtest::noise
