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
#include <random>

#include "lgtest/noise.hpp"
#include "lgtest/qsim.hpp"

namespace {

using namespace lgtest;
using namespace lgtest::qsim;
using namespace lgtest::qsim::gates;

constexpr double kPi = std::numbers::pi;

Mat2 time_ordered(std::initializer_list<Mat2> seq) {
  Mat2 u = I();
  for (const Mat2& g : seq) u = matmul(g, u);
  return u;
}

DensityMatrix single_qubit(const Mat2& rho) { return DensityMatrix::from_entries(1, {rho.begin(), rho.end()}); }

Mat2 minus_eigenprojector(double theta) { return scale(0.5, add(I(), scale(-1.0, sigma_theta(theta)))); }

double sampled_fraction(const Counts& counts, int q) {
  std::uint64_t ones = 0, total = 0;
  for (const auto& [s, n] : counts) {
    total += n;
    if (outcome_bit(s, q)) ones += n;
  }
  return static_cast<double>(ones) / static_cast<double>(total);
}

// --- apply_1q ---------------------------------------------------------------

TEST(Apply1q, XFlipsZeroToOne) {
  const auto s = apply_1q(StateVector(1), X(), 0);
  EXPECT_NEAR(std::abs(s[1]), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(s[0]), 0.0, 1e-12);
}

TEST(Apply1q, HadamardTwiceIsIdentity) {
  const auto s = apply_1q(apply_1q(StateVector(1), H(), 0), H(), 0);
  EXPECT_NEAR(std::abs(s[0] - cplx(1.0)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(s[1]), 0.0, 1e-12);
}

TEST(Apply1q, RotationSequenceMapsOneToThetaMinusEigenstate) {
  // Time order H, Sdg, H, T, H.
  StateVector s = StateVector::basis(1, 1);
  for (const Mat2& g : {H(), Sdg(), H(), T(), H()}) s = apply_1q(s, g, 0);
  const Mat2 sig = sigma_theta(-3 * kPi / 4);
  // sigma |psi> = -|psi>
  const cplx a0 = sig[0] * s[0] + sig[1] * s[1];
  const cplx a1 = sig[2] * s[0] + sig[3] * s[1];
  EXPECT_NEAR(std::abs(a0 + s[0]), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(a1 + s[1]), 0.0, 1e-12);
}

TEST(Apply1q, RejectsNonUnitary) {
  EXPECT_THROW(apply_1q(StateVector(1), Mat2{1.0, 1.0, 0.0, 1.0}, 0), ValidationError);
}

TEST(Apply1q, RejectsQubitOutOfRange) {
  EXPECT_THROW(apply_1q(StateVector(2), X(), 2), ValidationError);
  EXPECT_THROW(apply_1q(StateVector(2), X(), -1), ValidationError);
}

TEST(Apply1q, NormPreservedUnderRandomGates) {
  std::mt19937_64 rng(7);
  const Mat2 pool[] = {X(), Y(), Z(), H(), S(), Sdg(), T(), Tdg(), Rx(0.3), Rz(1.1)};
  StateVector s(5);
  for (int i = 0; i < 500; ++i) {
    s = apply_1q(s, pool[rng() % std::size(pool)], static_cast<int>(rng() % 5));
    if (i % 7 == 0) s = apply_cnot(s, static_cast<int>(rng() % 2), 2 + static_cast<int>(rng() % 3));
    ASSERT_NEAR(s.norm_squared(), 1.0, 1e-12);
  }
}

TEST(Gates, RotationConjugatesZIntoSigmaTheta) {
  const Mat2 r = time_ordered({H(), Sdg(), H(), T(), H()});
  EXPECT_LT(max_abs_diff(matmul(r, matmul(Z(), adjoint(r))), sigma_theta(-3 * kPi / 4)), 1e-12);
}

TEST(Gates, DeviceSetIsUnitary) {
  for (const Mat2& g : {I(), X(), Y(), Z(), H(), S(), Sdg(), T(), Tdg()}) EXPECT_TRUE(is_unitary(g, 1e-12));
}

// --- apply_cnot -------------------------------------------------------------

TEST(ApplyCnot, FlipsTargetWhenControlSet) {
  // Q0 = 1, Q1 = 0 is index 1; after CNOT(0 -> 1) it is index 3.
  const auto s = apply_cnot(StateVector::basis(2, 1), 0, 1);
  EXPECT_NEAR(std::abs(s[3]), 1.0, 1e-12);
}

TEST(ApplyCnot, MakesBellStateWithMixedTarget) {
  auto s = apply_cnot(apply_1q(StateVector(2), H(), 0), 0, 1);
  EXPECT_NEAR(std::norm(s[0]), 0.5, 1e-12);
  EXPECT_NEAR(std::norm(s[3]), 0.5, 1e-12);
  const auto target = DensityMatrix::from_state(s).reduced(1);
  EXPECT_NEAR(std::abs(target[0] - 0.5), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(target[1]), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(target[3] - 0.5), 0.0, 1e-12);
}

TEST(ApplyCnot, HadamardConjugationSwapsRoles) {
  for (std::size_t b = 0; b < 4; ++b) {
    StateVector lhs = StateVector::basis(2, b);
    lhs = apply_1q(apply_1q(lhs, H(), 0), H(), 1);
    lhs = apply_cnot(lhs, 0, 1);
    lhs = apply_1q(apply_1q(lhs, H(), 0), H(), 1);
    const StateVector rhs = apply_cnot(StateVector::basis(2, b), 1, 0);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(std::abs(lhs[i] - rhs[i]), 0.0, 1e-12);
  }
}

TEST(ApplyCnot, RejectsEqualOperands) { EXPECT_THROW(apply_cnot(StateVector(2), 1, 1), ValidationError); }

// --- sampling ---------------------------------------------------------------

TEST(SampleShots, GroundStateGivesAllZeros) {
  const auto c = sample_shots(StateVector(5), 8192, 1);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c.at("00000"), 8192u);
}

TEST(SampleShots, EqualSuperpositionWithinFiveSigma) {
  const auto s = apply_1q(StateVector(5), H(), 2);
  const auto c = sample_shots(s, 8192, 99);
  EXPECT_NEAR(sampled_fraction(c, 2), 0.5, 5 * std::sqrt(0.25 / 8192));
  std::uint64_t total = 0;
  for (const auto& [k, n] : c) total += n;
  EXPECT_EQ(total, 8192u);
}

TEST(SampleShots, DeterministicForSeed) {
  const auto s = apply_1q(apply_1q(StateVector(5), H(), 2), H(), 0);
  EXPECT_EQ(sample_shots(s, 4096, 5), sample_shots(s, 4096, 5));
  EXPECT_NE(sample_shots(s, 4096, 5), sample_shots(s, 4096, 6));
}

TEST(SampleShots, RejectsZeroShots) { EXPECT_THROW(sample_shots(StateVector(1), 0, 1), ValidationError); }

TEST(Outcomes, LittleEndianStrings) {
  EXPECT_EQ(outcome_string(1, 5), "00001");
  EXPECT_EQ(outcome_string(4, 5), "00100");
  EXPECT_EQ(outcome_bit("00100", 2), 1);
  EXPECT_EQ(outcome_bit("00100", 0), 0);
  EXPECT_THROW(outcome_bit("001", 4), ValidationError);
}

// --- dephase ----------------------------------------------------------------

TEST(Dephase, DiagonalStateIsFixed) {
  const auto d = dephase(single_qubit({0.3, 0.0, 0.0, 0.7}), 0, 0.0);
  EXPECT_NEAR(d(0, 0).real(), 0.3, 1e-12);
  EXPECT_NEAR(d(1, 1).real(), 0.7, 1e-12);
}

TEST(Dephase, PlusStateBecomesMaximallyMixed) {
  const auto d = dephase(single_qubit({0.5, 0.5, 0.5, 0.5}), 0, 0.0);
  EXPECT_NEAR(std::abs(d(0, 1)), 0.0, 1e-12);
  EXPECT_NEAR(d(0, 0).real(), 0.5, 1e-12);
}

TEST(Dephase, ThetaEigenstateIsFixed) {
  for (double theta : {-3 * kPi / 4, 0.4, 2.0}) {
    const Mat2 rho = minus_eigenprojector(theta);
    const auto d = dephase(single_qubit(rho), 0, theta);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(std::abs(d(i / 2, i % 2) - rho[i]), 0.0, 1e-12);
  }
}

TEST(Dephase, IdempotentAndTracePreserving) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  for (int trial = 0; trial < 20; ++trial) {
    StateVector s(3);
    for (int q = 0; q < 3; ++q) s = apply_1q(apply_1q(s, Rx(u(rng)), q), Rz(u(rng)), q);
    s = apply_cnot(s, 0, 2);
    const double angle = u(rng);
    const auto once = dephase(DensityMatrix::from_state(s), 1, angle);
    const auto twice = dephase(once, 1, angle);
    EXPECT_NEAR(once.trace(), 1.0, 1e-12);
    for (std::size_t r = 0; r < once.dim(); ++r)
      for (std::size_t c = 0; c < once.dim(); ++c) ASSERT_NEAR(std::abs(once(r, c) - twice(r, c)), 0.0, 1e-12);
  }
}

TEST(Dephase, KrausCompleteness) {
  for (double angle : {0.0, 0.7, -3 * kPi / 4}) EXPECT_LT(noise::completeness_error(dephasing_kraus(angle)), 1e-12);
}

TEST(Dephase, OperatorFormMatchesChannel) {
  const Mat2 rho{0.6, cplx(0.1, 0.2), cplx(0.1, -0.2), 0.4};
  const double angle = 1.3;
  const Mat2 op = dephase_operator(rho, angle);
  const auto ch = dephase(single_qubit(rho), 0, angle);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(std::abs(op[i] - ch(i / 2, i % 2)), 0.0, 1e-12);
}

// --- expect / Observable / DensityMatrix ------------------------------------

TEST(Expect, OneStateHasNegativeZ) {
  EXPECT_NEAR(expect(single_qubit({0.0, 0.0, 0.0, 1.0}), Observable::pauli_z(1, 0)), -1.0, 1e-12);
}

TEST(Expect, ThetaEigenstateHasMinusOne) {
  const double theta = -3 * kPi / 4;
  EXPECT_NEAR(expect(single_qubit(minus_eigenprojector(theta)), Observable::sigma(1, 0, theta)), -1.0, 1e-12);
}

TEST(Expect, ThetaStateZExpectation) {
  // sigma_z on the -1 eigenstate of sigma_theta is -cos(theta); the operational
  // outcome (bit 1 -> +1) is its negative, cos(theta) = -1/sqrt2.
  const double theta = -3 * kPi / 4;
  const double z = expect(single_qubit(minus_eigenprojector(theta)), Observable::pauli_z(1, 0));
  EXPECT_NEAR(z, 1.0 / std::numbers::sqrt2, 1e-12);
  EXPECT_NEAR(-z, std::cos(theta), 1e-12);
}

TEST(Expect, DimensionMismatchRejected) {
  EXPECT_THROW(expect(DensityMatrix(2), Observable::pauli_z(1, 0)), ValidationError);
}

TEST(Observable, PauliBuiltHasUnitEigenvalues) {
  // sigma_theta^2 = I, so eigenvalues are +-1.
  for (double theta : {0.0, 0.9, -2.2}) {
    const Mat2 s = sigma_theta(theta);
    EXPECT_LT(max_abs_diff(matmul(s, s), I()), 1e-12);
  }
  EXPECT_THROW(Observable::from_entries(1, {0.0, 1.0, 0.0, 0.0}), ValidationError);
}

TEST(DensityMatrix, ValidatesEntries) {
  EXPECT_THROW(DensityMatrix::from_entries(1, {0.5, 0.0, 0.0, 0.4}), ValidationError);       // trace
  EXPECT_THROW(DensityMatrix::from_entries(1, {0.5, 0.3, 0.0, 0.5}), ValidationError);       // Hermitian
  EXPECT_NO_THROW(DensityMatrix::from_entries(1, {0.5, 0.5, 0.5, 0.5}));
}

TEST(DensityMatrix, UnitaryEvolutionMatchesStateVector) {
  StateVector s(3);
  DensityMatrix d(3);
  const Mat2 seq[] = {H(), T(), Rx(0.4), S(), H()};
  for (int i = 0; i < 5; ++i) {
    s = apply_1q(s, seq[i], i % 3);
    d = apply_1q(d, seq[i], i % 3);
  }
  s = apply_cnot(s, 0, 2);
  d = apply_cnot(d, 0, 2);
  const auto ps = s.probabilities();
  const auto pd = d.probabilities();
  for (std::size_t i = 0; i < ps.size(); ++i) EXPECT_NEAR(ps[i], pd[i], 1e-12);
  EXPECT_TRUE(d.is_hermitian());
  EXPECT_NEAR(d.trace(), 1.0, 1e-12);
}

}  // namespace
