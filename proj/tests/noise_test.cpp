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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "lgtest/analytics.hpp"
#include "lgtest/experiment.hpp"
#include "lgtest/noise.hpp"
#include "lgtest/oracle.hpp"

namespace {

using namespace lgtest;
using namespace lgtest::noise;
using protocols::build_protocol;
using protocols::GatesetMode;
using protocols::ProtocolId;
using protocols::Role;

constexpr double kPi = std::numbers::pi;

double c_a(const NoiseModel& m) {
  return oracle::brute_force(build_protocol(ProtocolId::A), m).correlator(Role::O1, Role::O3);
}

TEST(ApplyNoise, ZeroModelMatchesIdeal) {
  for (auto id : protocols::kAllProtocols) {
    const auto pc = build_protocol(id);
    const auto ideal = outcome_distribution(apply_noise(pc, NoiseModel{}));
    NoiseModel zero;
    zero.eps_ro_qubit[3] = 0.0;
    const auto same = outcome_distribution(apply_noise(pc, zero));
    for (std::size_t i = 0; i < ideal.size(); ++i) EXPECT_NEAR(ideal[i], same[i], 1e-12);
  }
}

TEST(ApplyNoise, HalfReadoutFlipRandomizesBits) {
  NoiseModel m;
  m.eps_ro = 0.5;
  const auto f = oracle::brute_force(build_protocol(ProtocolId::F), m);
  for (Role r : {Role::O2, Role::M3, Role::M4, Role::M5, Role::O3}) EXPECT_NEAR(f.probability_plus(r), 0.5, 1e-12);
  EXPECT_NEAR(f.correlator(Role::O2, Role::O3), 0.0, 1e-12);

  protocols::ExperimentPlan plan;
  plan.noise = m;
  const auto run = protocols::run_protocol(plan, ProtocolId::A);
  const auto est = analytics::correlator(run.repetitions, run.protocol.roles, Role::O1, Role::O3);
  EXPECT_NEAR(est.mean, 0.0, 5.0 / std::sqrt(8192.0 * 10));
}

TEST(ApplyNoise, ReadoutOnSystemQubitScalesCorrelator) {
  const double ideal = c_a({});
  for (double eps : {0.01, 0.1, 0.3}) {
    NoiseModel m;
    m.eps_ro_qubit[protocols::kSystemQubit] = eps;
    EXPECT_NEAR(c_a(m), (1 - 2 * eps) * ideal, 1e-12);
    EXPECT_NEAR(outcome_distribution(apply_noise(build_protocol(ProtocolId::A), m))[4],
                oracle::brute_force(build_protocol(ProtocolId::A), m).joint[4], 1e-12);
  }
}

TEST(ApplyNoise, TimingGatesCarryNoGateError) {
  NoiseModel m;
  m.p1 = 0.01;
  const auto pc = build_protocol(ProtocolId::F);
  const auto prog = apply_noise(pc, m);
  int pulses = 0, depol = 0;
  for (const auto& g : pc.circuit.gates())
    if (!g.is_two_qubit() && !gateset::is_timing_only(g.kind)) ++pulses;
  for (const auto& s : prog.steps)
    if (s.label == "depol1") ++depol;
  EXPECT_EQ(depol, pulses);
}

TEST(ApplyNoise, IdleDampingOnlyBeforeMeasurement) {
  NoiseModel m;
  m.gamma_idle = 0.01;
  const auto pc = build_protocol(ProtocolId::B);
  const auto prog = apply_noise(pc, m);
  for (const auto& s : prog.steps) {
    if (s.label != "idle") continue;
    const int q = s.qubits[0];
    if (const auto meas = pc.circuit.measurement_slot(q)) {
      EXPECT_LT(s.slot, *meas);
    }
    const auto* g = pc.circuit.at(q, s.slot);
    EXPECT_TRUE(g == nullptr || gateset::is_timing_only(g->kind));
  }
}

TEST(ApplyNoise, KickWithoutSiteRejected) {
  const auto a = build_protocol(ProtocolId::A);
  EXPECT_THROW(apply_noise(a.circuit, invasive_o2({}, 0.3)), ValidationError);
  EXPECT_THROW(apply_noise(a, invasive_o2({}, 0.3)), ValidationError);
  EXPECT_NO_THROW(apply_noise(build_protocol(ProtocolId::B), invasive_o2({}, 0.3)));
}

TEST(NoiseModel, ValidationRejectsOutOfRange) {
  NoiseModel m;
  m.p1 = 1.5;
  EXPECT_THROW(m.validate(), ValidationError);
  m = {};
  m.eps_ro = -0.1;
  EXPECT_THROW(m.validate(), ValidationError);
  m = invasive_o2({}, 4.0);
  EXPECT_THROW(m.validate(), ValidationError);
  m = invasive_o2({}, kPi);
  EXPECT_NO_THROW(m.validate());
}

TEST(Channels, KrausCompleteness) {
  for (double p : {0.0, 0.01, 0.3, 1.0}) {
    EXPECT_LT(completeness_error(depolarizing_1q(p)), 1e-12);
    EXPECT_LT(completeness_error(depolarizing_2q(p)), 1e-12);
    EXPECT_LT(completeness_error(amplitude_damping(p)), 1e-12);
  }
}

TEST(Channels, FullDepolarizingGivesMaximallyMixed) {
  qsim::DensityMatrix d = qsim::DensityMatrix::from_entries(1, {0.0, 0.0, 0.0, 1.0});
  const std::array<int, 1> q{0};
  d.apply_kraus(q, depolarizing_1q(1.0));
  EXPECT_NEAR(d(0, 0).real(), 0.5, 1e-12);

  qsim::DensityMatrix d2(2);
  const std::array<int, 2> qq{0, 1};
  d2.apply_kraus(qq, depolarizing_2q(1.0));
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(d2(i, i).real(), 0.25, 1e-12);
}

TEST(Invasive, ZeroKickHasNoEffect) {
  const auto base = oracle::exact_program(protocols::kDeviceTheta, GatesetMode::Device);
  const auto kicked = oracle::exact_program(protocols::kDeviceTheta, GatesetMode::Device, invasive_o2({}, 0.0));
  EXPECT_NEAR(kicked.lg(), base.lg(), 1e-12);
  EXPECT_NEAR(kicked.eps[0], 0.0, 1e-12);
  EXPECT_NEAR(kicked.eps_total, base.eps_total, 1e-12);
}

TEST(Invasive, QuarterTurnKickIsDetected) {
  const auto ex = oracle::exact_program(protocols::kDeviceTheta, GatesetMode::Device, invasive_o2({}, kPi / 2));
  EXPECT_GT(ex.eps[0], 0.2);
  const bool condition = ex.lg() < 0 && std::abs(ex.lg()) >= ex.eps_total;
  EXPECT_FALSE(condition);
  // Only B carries position 2 among the adroitness protocols.
  EXPECT_NEAR(ex.eps[1], 0.0, 1e-12);
  EXPECT_NEAR(ex.eps[2], 0.0, 1e-12);
  EXPECT_NEAR(ex.eps[3], 0.0, 1e-12);
}

TEST(Invasive, AnyNonzeroKickIsDetected) {
  for (double k : {1e-3, 0.1, -0.7, 2.0, -kPi}) {
    const auto ex = oracle::exact_program(protocols::kDeviceTheta, GatesetMode::Device, invasive_o2({}, k));
    EXPECT_GT(ex.eps[0], 0.0) << "kappa " << k;
  }
}

TEST(Monotonicity, CorrelatorMagnitudeVersusNoiseGrid) {
  // |c_a| shrinks as depolarizing or readout noise grows. Amplitude damping
  // pulls the system toward |0>, which is the majority outcome of protocol A
  // here, so |c_a| grows with gamma instead.
  const std::vector<double> grid{0.0, 0.01, 0.05, 0.1, 0.2};
  for (double base : {0.0, 0.02}) {
    double prev_p1 = 2, prev_p2 = 2, prev_ro = 2, prev_g = -1;
    for (double v : grid) {
      NoiseModel m;
      m.p2 = base;
      m.p1 = v;
      const double a1 = std::abs(c_a(m));
      m = {};
      m.p1 = base;
      m.p2 = v;
      const double a2 = std::abs(c_a(m));
      m = {};
      m.p1 = base;
      m.eps_ro = v;
      const double a3 = std::abs(c_a(m));
      m = {};
      m.p1 = base;
      m.gamma_idle = v;
      const double a4 = std::abs(c_a(m));
      EXPECT_LE(a1, prev_p1 + 1e-12);
      EXPECT_LE(a2, prev_p2 + 1e-12);
      EXPECT_LE(a3, prev_ro + 1e-12);
      EXPECT_GE(a4, prev_g - 1e-12);
      prev_p1 = a1;
      prev_p2 = a2;
      prev_ro = a3;
      prev_g = a4;
    }
  }
}

TEST(NoisySimulation, SamplerPathMatchesOracle) {
  NoiseModel m;
  m.p1 = 0.01;
  m.p2 = 0.02;
  m.eps_ro = 0.03;
  m.gamma_idle = 0.002;
  m.eps_ro_qubit[1] = 0.07;
  for (auto id : protocols::kAllProtocols) {
    const auto pc = build_protocol(id);
    const auto p = outcome_distribution(apply_noise(pc, m));
    const auto ex = oracle::brute_force(pc, m);
    for (std::size_t i = 0; i < p.size(); ++i) ASSERT_NEAR(p[i], ex.joint[i], 1e-10);
  }
}

}  // namespace
