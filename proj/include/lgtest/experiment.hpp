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

#pragma once

#include <cstdint>
#include <future>
#include <map>
#include <vector>

#include "lgtest/compiler.hpp"
#include "lgtest/noise.hpp"
#include "lgtest/protocols.hpp"
#include "lgtest/qsim.hpp"

namespace lgtest::protocols {

struct ExperimentPlan {
  double theta = kDeviceTheta;
  std::uint64_t shots = 8192;
  int repetitions = 10;
  std::uint64_t base_seed = 20170314;
  noise::NoiseModel noise;
  GatesetMode mode = GatesetMode::Device;
  AncillaAssignment ancillas;

  void validate() const {
    if (shots < 1) throw ValidationError("shots must be >= 1");
    if (repetitions < 2) throw ValidationError("repetitions must be >= 2");
    if (!std::isfinite(theta)) throw ValidationError("theta must be finite");
    noise.validate();
  }
};

struct ProtocolRun {
  ProtocolCircuit protocol;
  std::vector<double> distribution;  // exact outcome distribution, readout included
  std::vector<qsim::Counts> repetitions;
};

struct PlanResult {
  ExperimentPlan plan;
  std::map<ProtocolId, ProtocolRun> runs;

  const ProtocolRun& at(ProtocolId id) const { return runs.at(id); }
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of one (protocol, repetition) job: base_seed xor a hash of the pair.
inline std::uint64_t job_seed(std::uint64_t base_seed, ProtocolId id, int repetition) {
  const auto key = (static_cast<std::uint64_t>(id) << 32) | static_cast<std::uint32_t>(repetition);
  return base_seed ^ splitmix64(key);
}

/// Noise model as seen by one protocol: the kick only exists where its position does.
inline noise::NoiseModel model_for(const ProtocolCircuit& pc, const noise::NoiseModel& model) {
  noise::NoiseModel m = model;
  if (m.kick && pc.site(m.kick->position) == nullptr) m.kick.reset();
  return m;
}

inline ProtocolRun run_protocol(const ExperimentPlan& plan, ProtocolId id) {
  ProtocolRun run;
  run.protocol = build_protocol(id, plan.theta, plan.mode, plan.ancillas);
  if (gateset::compile(run.protocol.circuit) != run.protocol.circuit)
    throw InvariantError("compiled protocol differs from the protected circuit");
  const auto prog = noise::apply_noise(run.protocol, model_for(run.protocol, plan.noise));
  run.distribution = noise::outcome_distribution(prog);
  const int n = run.protocol.circuit.n_qubits();
  for (int rep = 0; rep < plan.repetitions; ++rep)
    run.repetitions.push_back(qsim::sample_counts(run.distribution, n, plan.shots, job_seed(plan.base_seed, id, rep)));
  return run;
}

/// Builds, compiles, simulates and samples all six protocols. Protocols run
/// concurrently; every job is a pure function of the plan, so results do not
/// depend on scheduling.
inline PlanResult run_plan(const ExperimentPlan& plan) {
  plan.validate();
  std::vector<std::future<ProtocolRun>> jobs;
  for (ProtocolId id : kAllProtocols)
    jobs.push_back(std::async(std::launch::async, [&plan, id] { return run_protocol(plan, id); }));
  PlanResult result;
  result.plan = plan;
  for (std::size_t i = 0; i < jobs.size(); ++i) result.runs[kAllProtocols[i]] = jobs[i].get();
  return result;
}

}  // namespace lgtest::protocols
