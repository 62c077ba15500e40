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
 * Independent ground truth for the protocol program.
 *
 * Three routes to the correlators:
 *  - closed form: <O1O3>_a = <O1O2>_f = cos(theta), <O2O3>_f = cos^4(theta);
 *  - single-qubit superoperator algebra with the dephasing maps;
 *  - brute force on the built circuits: every operator is expanded to a dense
 *    2^n x 2^n matrix and the joint outcome distribution is enumerated.
 *
 * The brute-force route shares only the gate and Kraus matrices with the
 * sampling simulator, not its index arithmetic.
 */

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "lgtest/noise.hpp"
#include "lgtest/protocols.hpp"
#include "lgtest/qsim.hpp"

namespace lgtest::oracle {

using protocols::Role;

inline double closed_form_lg(double theta) {
  const double c = std::cos(theta);
  return 2.0 * c + c * c * c * c + 1.0;
}

struct Correlators {
  double c_a = 0.0;   // <O1 O3>_a
  double c_12 = 0.0;  // <O1 O2>_f
  double c_23 = 0.0;  // <O2 O3>_f
  double lg() const { return c_a + c_12 + c_23 + 1.0; }
};

inline Correlators closed_form_correlators(double theta) {
  const double c = std::cos(theta);
  return {c, c, c * c * c * c};
}

namespace detail {

inline cplx trace(const qsim::Mat2& m) { return m[0] + m[3]; }

inline qsim::Mat2 anticommutator(const qsim::Mat2& a, const qsim::Mat2& b) {
  return qsim::add(qsim::matmul(a, b), qsim::matmul(b, a));
}

}  // namespace detail

/// Trace formulas over single-qubit superoperators, starting from rho_theta = |1>_theta<1|_theta.
/// Operational outcomes are minus the Pauli eigenvalues; each two-point
/// correlator carries the sign twice.
inline Correlators superoperator_correlators(double theta) {
  using qsim::dephase_operator;
  using namespace qsim::gates;
  const qsim::Mat2 s_theta = sigma_theta(theta);
  const qsim::Mat2 s_z = Z();
  const qsim::Mat2 rho = qsim::scale(0.5, qsim::add(I(), qsim::scale(-1.0, s_theta)));
  const double sign = (-1.0) * (-1.0);

  Correlators out;
  const cplx c13 = 0.5 * detail::trace(qsim::matmul(s_z, detail::anticommutator(s_theta, rho)));
  out.c_a = sign * c13.real();
  out.c_12 = out.c_a;

  const qsim::Mat2 after_o2 = detail::anticommutator(s_z, dephase_operator(rho, theta));
  const qsim::Mat2 evolved = dephase_operator(dephase_operator(dephase_operator(after_o2, theta), 0.0), theta);
  out.c_23 = sign * (0.5 * detail::trace(qsim::matmul(s_z, evolved))).real();
  return out;
}

// ---------------------------------------------------------------------------
// Brute force

using Dense = Eigen::MatrixXcd;

/// Expands a local operator on `qubits` to the full register.
inline Dense expand(const std::vector<cplx>& local, const std::vector<int>& qubits, int n_qubits) {
  const std::size_t dim = std::size_t{1} << n_qubits;
  const std::size_t k = qubits.size();
  const std::size_t ld = std::size_t{1} << k;
  std::size_t mask = 0;
  for (int q : qubits) mask |= std::size_t{1} << q;
  auto local_index = [&](std::size_t full) {
    std::size_t li = 0;
    for (std::size_t j = 0; j < k; ++j)
      if ((full >> qubits[j]) & 1U) li |= std::size_t{1} << j;
    return li;
  };
  Dense m = Dense::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c)
      if ((r & ~mask) == (c & ~mask))
        m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = local[local_index(r) * ld + local_index(c)];
  return m;
}

/// Dense unitary of the gates of a circuit (measurements ignored).
inline Dense circuit_unitary(const gateset::Circuit& c) {
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << c.n_qubits());
  Dense u = Dense::Identity(dim, dim);
  for (const auto& g : c.gates()) {
    if (g.is_two_qubit()) {
      const auto m = qsim::gates::CNOT();
      u = expand({m.begin(), m.end()}, {g.qubit, g.target}, c.n_qubits()) * u;
    } else {
      const auto m = g.matrix();
      u = expand({m.begin(), m.end()}, {g.qubit}, c.n_qubits()) * u;
    }
  }
  return u;
}

/// max |a - phase * b| over the best global phase.
inline double distance_up_to_phase(const Dense& a, const Dense& b) {
  const cplx overlap = (b.adjoint() * a).trace();
  const cplx phase = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : cplx(1.0);
  return (a - phase * b).cwiseAbs().maxCoeff();
}

struct ExactResult {
  int n_qubits = 5;
  std::vector<double> joint;  // over basis indices, readout applied, unmeasured bits 0
  protocols::RoleMap roles;

  /// <a b> with O1 = +1 and bit 1 -> +1.
  double correlator(Role a, Role b) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < joint.size(); ++i) acc += joint[i] * value(a, i) * value(b, i);
    return acc;
  }

  /// Marginal probability that the qubit bound to `r` reads 1.
  double probability_plus(Role r) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < joint.size(); ++i)
      if (value(r, i) > 0) acc += joint[i];
    return acc;
  }

 private:
  int value(Role r, std::size_t index) const {
    if (r == Role::O1) return 1;
    auto it = roles.find(r);
    if (it == roles.end()) throw ValidationError("role " + protocols::to_string(r) + " not measured");
    return ((index >> it->second) & 1U) ? 1 : -1;
  }
};

inline ExactResult brute_force(const noise::NoisyProgram& prog, const protocols::RoleMap& roles) {
  if (prog.n_qubits > qsim::kMaxQubits) throw ValidationError("brute force supports at most 5 qubits");
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << prog.n_qubits);
  std::vector<double> p(static_cast<std::size_t>(dim));

  bool unitary = true;
  for (const auto& s : prog.steps) unitary = unitary && s.unitary;
  if (unitary) {
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
    psi(0) = 1.0;
    for (const auto& s : prog.steps) psi = expand(s.kraus.front(), s.qubits, prog.n_qubits) * psi;
    for (Eigen::Index i = 0; i < dim; ++i) p[static_cast<std::size_t>(i)] = std::norm(psi(i));
  } else {
    Dense rho = Dense::Zero(dim, dim);
    rho(0, 0) = 1.0;
    for (const auto& s : prog.steps) {
      Dense next = Dense::Zero(dim, dim);
      for (const auto& k : s.kraus) {
        const Dense full = expand(k, s.qubits, prog.n_qubits);
        next += full * rho * full.adjoint();
      }
      rho = std::move(next);
    }
    for (Eigen::Index i = 0; i < dim; ++i) p[static_cast<std::size_t>(i)] = rho(i, i).real();
  }

  // Readout: sum over every flip pattern of the measured qubits.
  std::size_t measured_mask = 0;
  for (int q : prog.measured) measured_mask |= std::size_t{1} << q;
  std::vector<double> joint(p.size(), 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t flips = 0; flips < p.size(); ++flips) {
      if (flips & ~measured_mask) continue;
      double w = 1.0;
      for (int q : prog.measured) {
        const double e = prog.readout_flip[static_cast<std::size_t>(q)];
        w *= ((flips >> q) & 1U) ? e : 1.0 - e;
      }
      joint[(i ^ flips) & measured_mask] += w * p[i];
    }
  }
  return ExactResult{prog.n_qubits, std::move(joint), roles};
}

/// Exact distribution and correlators of a built protocol under `model`.
inline ExactResult brute_force(const protocols::ProtocolCircuit& pc, const noise::NoiseModel& model = {}) {
  noise::NoiseModel m = model;
  if (m.kick && pc.site(m.kick->position) == nullptr) m.kick.reset();
  return brute_force(noise::apply_noise(pc, m), pc.roles);
}

/// Exact (c_a, c_12, c_23) from protocols A and F.
inline Correlators brute_force_correlators(double theta, protocols::GatesetMode mode,
                                           const noise::NoiseModel& model = {}) {
  const auto a = brute_force(protocols::build_protocol(protocols::ProtocolId::A, theta, mode), model);
  const auto f = brute_force(protocols::build_protocol(protocols::ProtocolId::F, theta, mode), model);
  return {a.correlator(Role::O1, Role::O3), f.correlator(Role::O1, Role::O2), f.correlator(Role::O2, Role::O3)};
}

/// Exact LG, per-protocol <O1 O3>, epsilons and no-signaling gap of the whole program.
struct ExactProgram {
  Correlators lg_terms;
  std::array<double, 4> c_13{};  // b, c, d, e
  std::array<double, 4> eps{};
  double eps_total = 0.0;
  double c_13_f = 0.0;
  double lg() const { return lg_terms.lg(); }
};

inline ExactProgram exact_program(double theta, protocols::GatesetMode mode, const noise::NoiseModel& model = {}) {
  using protocols::ProtocolId;
  ExactProgram out;
  const auto a = brute_force(protocols::build_protocol(ProtocolId::A, theta, mode), model);
  const auto f = brute_force(protocols::build_protocol(ProtocolId::F, theta, mode), model);
  out.lg_terms = {a.correlator(Role::O1, Role::O3), f.correlator(Role::O1, Role::O2), f.correlator(Role::O2, Role::O3)};
  const std::array<ProtocolId, 4> ids{ProtocolId::B, ProtocolId::C, ProtocolId::D, ProtocolId::E};
  for (std::size_t i = 0; i < 4; ++i) {
    out.c_13[i] = brute_force(protocols::build_protocol(ids[i], theta, mode), model).correlator(Role::O1, Role::O3);
    out.eps[i] = std::abs(out.c_13[i] - out.lg_terms.c_a);
    out.eps_total += out.eps[i];
  }
  out.c_13_f = f.correlator(Role::O1, Role::O3);
  return out;
}

// ---------------------------------------------------------------------------
// Violation region

/// Root theta* in (pi/2, pi) of 2c + c^4 + 1 = 0, c = cos(theta). LG < 0 for
/// |theta| in (theta*, pi). The polynomial is strictly increasing for
/// c > -2^(-1/3), which brackets the root.
inline double violation_boundary() {
  auto f = [](double c) { return 2.0 * c + c * c * c * c + 1.0; };
  double lo = -std::cbrt(0.5), hi = 0.0;  // f(lo) < 0 < f(hi)
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return std::acos(0.5 * (lo + hi));
}

// ---------------------------------------------------------------------------
// Sweeps

struct SweepRecord {
  double theta = 0.0;
  Correlators closed_form;
  Correlators superoperator;
  Correlators brute_force;

  double max_disagreement() const {
    double worst = 0.0;
    for (const Correlators* c : {&superoperator, &brute_force}) {
      worst = std::max({worst, std::abs(c->c_a - closed_form.c_a), std::abs(c->c_12 - closed_form.c_12),
                        std::abs(c->c_23 - closed_form.c_23), std::abs(c->lg() - closed_form_lg(theta))});
    }
    return worst;
  }
};

/// Evaluates all three routes at each theta (ideal gate set).
inline std::vector<SweepRecord> sweep(const std::vector<double>& thetas) {
  std::vector<SweepRecord> out;
  for (double t : thetas)
    out.push_back({t, closed_form_correlators(t), superoperator_correlators(t),
                   brute_force_correlators(t, protocols::GatesetMode::Ideal)});
  return out;
}

/// `n` angles spaced uniformly over [-pi, pi].
inline std::vector<double> uniform_thetas(int n) {
  std::vector<double> t;
  for (int i = 0; i < n; ++i) t.push_back(-std::numbers::pi + 2.0 * std::numbers::pi * i / (n - 1));
  return t;
}

inline std::string sweep_csv(const std::vector<SweepRecord>& records) {
  std::ostringstream out;
  out.precision(17);
  out << "theta,path,c_a,c_12,c_23,lg\n";
  for (const auto& r : records) {
    const std::pair<const char*, const Correlators*> paths[] = {
        {"closed_form", &r.closed_form}, {"superoperator", &r.superoperator}, {"brute_force", &r.brute_force}};
    for (const auto& [name, c] : paths)
      out << r.theta << ',' << name << ',' << c->c_a << ',' << c->c_12 << ',' << c->c_23 << ',' << c->lg() << '\n';
  }
  return out.str();
}

}  // namespace lgtest::oracle
