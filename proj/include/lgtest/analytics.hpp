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
 * Correlators, adroitness bounds, the LG quantity and the violation verdict.
 *
 * Errors are standard errors across repetitions, combined in quadrature.
 * The verdict uses central values only.
 */

#pragma once

#include <array>
#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "lgtest/experiment.hpp"
#include "lgtest/protocols.hpp"

namespace lgtest::analytics {

using protocols::ProtocolId;
using protocols::Role;
using protocols::RoleMap;

struct CorrelatorEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  int n_reps = 0;
};

struct ValueWithError {
  double value = 0.0;
  double error = 0.0;
};

enum class Verdict { ViolationEstablished, ViolationUnresolved, NoViolation };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::ViolationEstablished: return "violation_established";
    case Verdict::ViolationUnresolved: return "violation_unresolved";
    case Verdict::NoViolation: return "no_violation";
  }
  return "?";
}

/// Mean of the outcome product a*b over one repetition's shots.
inline double repetition_correlator(const qsim::Counts& counts, const RoleMap& roles, Role a, Role b) {
  for (Role r : {a, b})
    if (r != Role::O1 && !roles.contains(r)) throw ValidationError("role " + protocols::to_string(r) + " not measured");
  double sum = 0.0;
  std::uint64_t total = 0;
  for (const auto& row : protocols::outcomes(counts, roles)) {
    sum += static_cast<double>(row.count) * row[a] * row[b];
    total += row.count;
  }
  if (total == 0) throw ValidationError("repetition has no shots");
  return sum / static_cast<double>(total);
}

inline CorrelatorEstimate estimate(std::span<const double> per_rep) {
  const auto n = static_cast<int>(per_rep.size());
  if (n < 2) throw ValidationError("need at least two repetitions");
  const double mean = std::accumulate(per_rep.begin(), per_rep.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : per_rep) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1)) / std::sqrt(static_cast<double>(n)), n};
}

/// Cross-repetition mean and sample standard error of <a b>.
inline CorrelatorEstimate correlator(std::span<const qsim::Counts> reps, const RoleMap& roles, Role a, Role b) {
  std::vector<double> per_rep;
  for (const auto& c : reps) per_rep.push_back(repetition_correlator(c, roles, a, b));
  return estimate(per_rep);
}

inline ValueWithError adroitness(const CorrelatorEstimate& x, const CorrelatorEstimate& a) {
  return {std::abs(x.mean - a.mean), std::hypot(x.std_error, a.std_error)};
}

inline ValueWithError sum_with_quadrature(std::span<const ValueWithError> parts, double offset = 0.0) {
  // Offset added last so the value reproduces a + b + c + offset bit-for-bit.
  ValueWithError out;
  double var = 0.0;
  for (const auto& p : parts) {
    out.value += p.value;
    var += p.error * p.error;
  }
  out.value += offset;
  out.error = std::sqrt(var);
  return out;
}

inline ValueWithError lg_quantity(const ValueWithError& c_a, const ValueWithError& c_12, const ValueWithError& c_23) {
  const std::array<ValueWithError, 3> parts{c_a, c_12, c_23};
  return sum_with_quadrature(parts, 1.0);
}

inline ValueWithError lg_quantity(const CorrelatorEstimate& c_a, const CorrelatorEstimate& c_12,
                                  const CorrelatorEstimate& c_23) {
  return lg_quantity(ValueWithError{c_a.mean, c_a.std_error}, ValueWithError{c_12.mean, c_12.std_error},
                     ValueWithError{c_23.mean, c_23.std_error});
}

inline Verdict verdict(const ValueWithError& lg, const ValueWithError& eps_total) {
  if (lg.value >= 0.0) return Verdict::NoViolation;
  if (std::abs(lg.value) >= eps_total.value) return Verdict::ViolationEstablished;
  return Verdict::ViolationUnresolved;
}

/// |<O1 O3>_f - <O1 O3>_a|, a direct test of the equality the LG derivation assumes.
inline ValueWithError no_signaling_check(const CorrelatorEstimate& c_f, const CorrelatorEstimate& c_a) {
  return adroitness(c_f, c_a);
}

struct AdroitnessReport {
  std::array<CorrelatorEstimate, 4> c_13;  // <O1 O3> for b, c, d, e
  std::array<ValueWithError, 4> eps;       // eps_b .. eps_e
  ValueWithError eps_total;
};

struct LGReport {
  CorrelatorEstimate c_a, c_12, c_23;
  ValueWithError lg;
  ValueWithError eps_total;
  Verdict verdict = Verdict::NoViolation;
};

struct ProgramReport {
  LGReport lg;
  AdroitnessReport adroitness;
  CorrelatorEstimate c_13_f;
  ValueWithError no_signaling;
  std::uint64_t shots_checked = 0;
  std::uint64_t inequality_failures = 0;  // shots of F with O1O3 + O1O2 + O2O3 + 1 < 0
};

inline AdroitnessReport adroitness_report(const std::array<CorrelatorEstimate, 4>& c_13, const CorrelatorEstimate& c_a) {
  AdroitnessReport r;
  r.c_13 = c_13;
  for (std::size_t i = 0; i < 4; ++i) r.eps[i] = adroitness(c_13[i], c_a);
  r.eps_total = sum_with_quadrature(r.eps);
  return r;
}

/// Counts shots of F violating the per-shot identity. Always zero for +/-1 values.
inline std::uint64_t per_shot_inequality_failures(std::span<const qsim::Counts> reps, const RoleMap& roles,
                                                  std::uint64_t* checked = nullptr) {
  std::uint64_t bad = 0, seen = 0;
  for (const auto& c : reps) {
    for (const auto& row : protocols::outcomes(c, roles)) {
      const int o1 = row[Role::O1], o2 = row[Role::O2], o3 = row[Role::O3];
      seen += row.count;
      if (o1 * o3 + o1 * o2 + o2 * o3 + 1 < 0) bad += row.count;
    }
  }
  if (checked) *checked = seen;
  return bad;
}

inline ProgramReport analyze(const protocols::PlanResult& result) {
  auto corr = [&](ProtocolId id, Role a, Role b) {
    const auto& run = result.at(id);
    return correlator(run.repetitions, run.protocol.roles, a, b);
  };
  ProgramReport r;
  r.lg.c_a = corr(ProtocolId::A, Role::O1, Role::O3);
  r.lg.c_12 = corr(ProtocolId::F, Role::O1, Role::O2);
  r.lg.c_23 = corr(ProtocolId::F, Role::O2, Role::O3);
  r.lg.lg = lg_quantity(r.lg.c_a, r.lg.c_12, r.lg.c_23);
  r.adroitness = adroitness_report({corr(ProtocolId::B, Role::O1, Role::O3), corr(ProtocolId::C, Role::O1, Role::O3),
                                    corr(ProtocolId::D, Role::O1, Role::O3), corr(ProtocolId::E, Role::O1, Role::O3)},
                                   r.lg.c_a);
  r.lg.eps_total = r.adroitness.eps_total;
  r.lg.verdict = verdict(r.lg.lg, r.lg.eps_total);
  r.c_13_f = corr(ProtocolId::F, Role::O1, Role::O3);
  r.no_signaling = no_signaling_check(r.c_13_f, r.lg.c_a);
  const auto& f = result.at(ProtocolId::F);
  r.inequality_failures = per_shot_inequality_failures(f.repetitions, f.protocol.roles, &r.shots_checked);
  return r;
}

}  // namespace lgtest::analytics
