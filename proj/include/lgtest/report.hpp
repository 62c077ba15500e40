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
 * Report documents: the JSON report (full precision, stable field names),
 * the two human-readable tables (two decimals), and the CSV shot dump.
 *
 * JSON report layout (schema "lgtest.report/1"):
 *
 *   config            theta, shots, repetitions, seed, mode, noise{p1,p2,eps_ro,gamma_idle,kick}
 *   lg_table          measured{c_a,c_12,c_23: {mean,stderr,n_reps}, lg: {value,error}}
 *                     prediction{c_a,c_12,c_23,lg}
 *   adroitness_table  measured{c_b..c_e: estimate, eps_b..eps_e, eps_total: {value,error}}
 *                     prediction{c_b..c_e, eps_total}
 *   no_signaling      c_13_f: estimate, gap: {value,error}
 *   per_shot_check    shots, failures
 *   verdict           violation_established | violation_unresolved | no_violation
 */

#pragma once

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>

#include "json.hpp"
#include "lgtest/analytics.hpp"
#include "lgtest/experiment.hpp"
#include "lgtest/oracle.hpp"

namespace lgtest::report {

using analytics::CorrelatorEstimate;
using analytics::ValueWithError;
using nlohmann::ordered_json;

inline constexpr const char* kLgTitle = "The Leggett-Garg Quantity";
inline constexpr const char* kAdroitnessTitle = "Adroitness Test Results";

/// Quantum predictions for the table rows: exact, noiseless evaluation of the built circuits.
struct Prediction {
  oracle::Correlators lg_terms;
  std::array<double, 4> c_13{};
  double eps_total = 0.0;
};

inline Prediction predict(double theta, protocols::GatesetMode mode) {
  const auto ex = oracle::exact_program(theta, mode);
  return {ex.lg_terms, ex.c_13, ex.eps_total};
}

inline ordered_json to_json(const CorrelatorEstimate& e) {
  return {{"mean", e.mean}, {"stderr", e.std_error}, {"n_reps", e.n_reps}};
}

inline ordered_json to_json(const ValueWithError& v) { return {{"value", v.value}, {"error", v.error}}; }

inline ordered_json config_json(const protocols::ExperimentPlan& plan) {
  ordered_json noise{{"p1", plan.noise.p1},
                     {"p2", plan.noise.p2},
                     {"eps_ro", plan.noise.eps_ro},
                     {"gamma_idle", plan.noise.gamma_idle},
                     {"kick", nullptr}};
  if (plan.noise.kick) noise["kick"] = {{"position", plan.noise.kick->position}, {"angle", plan.noise.kick->angle}};
  return {{"theta", plan.theta},
          {"shots", plan.shots},
          {"repetitions", plan.repetitions},
          {"seed", plan.base_seed},
          {"mode", protocols::to_string(plan.mode)},
          {"noise", noise}};
}

inline ordered_json report_json(const protocols::ExperimentPlan& plan, const analytics::ProgramReport& r,
                                const Prediction& p) {
  const char* ids[] = {"b", "c", "d", "e"};
  ordered_json adro_measured, adro_pred;
  for (std::size_t i = 0; i < 4; ++i) adro_measured[std::string("c_") + ids[i]] = to_json(r.adroitness.c_13[i]);
  for (std::size_t i = 0; i < 4; ++i) adro_measured[std::string("eps_") + ids[i]] = to_json(r.adroitness.eps[i]);
  adro_measured["eps_total"] = to_json(r.adroitness.eps_total);
  for (std::size_t i = 0; i < 4; ++i) adro_pred[std::string("c_") + ids[i]] = p.c_13[i];
  adro_pred["eps_total"] = p.eps_total;

  return {{"schema", "lgtest.report/1"},
          {"config", config_json(plan)},
          {"lg_table",
           {{"measured",
             {{"c_a", to_json(r.lg.c_a)}, {"c_12", to_json(r.lg.c_12)}, {"c_23", to_json(r.lg.c_23)}, {"lg", to_json(r.lg.lg)}}},
            {"prediction",
             {{"c_a", p.lg_terms.c_a}, {"c_12", p.lg_terms.c_12}, {"c_23", p.lg_terms.c_23}, {"lg", p.lg_terms.lg()}}}}},
          {"adroitness_table", {{"measured", adro_measured}, {"prediction", adro_pred}}},
          {"no_signaling", {{"c_13_f", to_json(r.c_13_f)}, {"gap", to_json(r.no_signaling)}}},
          {"per_shot_check", {{"shots", r.shots_checked}, {"failures", r.inequality_failures}}},
          {"verdict", analytics::to_string(r.lg.verdict)}};
}

/// Two-decimal rendering with negative zero printed as 0.00.
inline std::string fixed2(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  std::string s = buf;
  if (s == "-0.00") s = "0.00";
  return s;
}

inline std::string pm(double v, double e) { return fixed2(v) + " +/- " + fixed2(e); }

namespace detail {

inline void row(std::ostringstream& out, const std::string& label, const std::vector<std::string>& cells) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%-20s", label.c_str());
  out << buf;
  for (const auto& c : cells) {
    std::snprintf(buf, sizeof buf, "| %-16s", c.c_str());
    out << buf;
  }
  out << "|\n";
}

}  // namespace detail

inline std::string render_tables(const analytics::ProgramReport& r, const Prediction& p) {
  std::ostringstream out;
  out << kLgTitle << "\n";
  detail::row(out, "", {"<O1O3>_a", "<O1O2>_f", "<O2O3>_f", "LG"});
  detail::row(out, "Measured",
              {pm(r.lg.c_a.mean, r.lg.c_a.std_error), pm(r.lg.c_12.mean, r.lg.c_12.std_error),
               pm(r.lg.c_23.mean, r.lg.c_23.std_error), pm(r.lg.lg.value, r.lg.lg.error)});
  detail::row(out, "Quantum Prediction",
              {fixed2(p.lg_terms.c_a), fixed2(p.lg_terms.c_12), fixed2(p.lg_terms.c_23), fixed2(p.lg_terms.lg())});
  out << "\n" << kAdroitnessTitle << "\n";
  detail::row(out, "", {"<O1O3>_b", "<O1O3>_c", "<O1O3>_d", "<O1O3>_e", "eps_total"});
  std::vector<std::string> measured, predicted;
  for (std::size_t i = 0; i < 4; ++i) measured.push_back(pm(r.adroitness.c_13[i].mean, r.adroitness.c_13[i].std_error));
  measured.push_back(pm(r.adroitness.eps_total.value, r.adroitness.eps_total.error));
  for (std::size_t i = 0; i < 4; ++i) predicted.push_back(fixed2(p.c_13[i]));
  predicted.push_back(fixed2(p.eps_total));
  detail::row(out, "Measured", measured);
  detail::row(out, "Quantum Prediction", predicted);
  out << "\nVerdict: " << analytics::to_string(r.lg.verdict) << "\n";
  return out.str();
}

inline std::string shots_csv(const protocols::PlanResult& result) {
  std::ostringstream out;
  out << "protocol,repetition,outcome,count\n";
  for (const auto& [id, run] : result.runs)
    for (std::size_t rep = 0; rep < run.repetitions.size(); ++rep)
      for (const auto& [outcome, n] : run.repetitions[rep])
        out << protocols::to_string(id) << ',' << rep << ',' << outcome << ',' << n << '\n';
  return out.str();
}

}  // namespace lgtest::report
