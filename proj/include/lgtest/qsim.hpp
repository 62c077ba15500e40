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
 * Exact simulation of small (<= 5 qubit) registers.
 *
 * Basis indices are little-endian: qubit 0 is the least significant bit of
 * the amplitude index. Measurement outcome +1 corresponds to |1> and -1 to
 * |0>, so an operational observable is the negative of its Pauli.
 */

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "lgtest/error.hpp"

namespace lgtest {

using cplx = std::complex<double>;

namespace qsim {

inline constexpr int kMaxQubits = 5;
inline constexpr double kAlgebraTol = 1e-12;
inline constexpr double kChannelTol = 1e-10;

/// Row-major 2x2 complex matrix.
using Mat2 = std::array<cplx, 4>;

/// Row-major 4x4 matrix over a qubit pair (a, b); local index = bit_a + 2 * bit_b.
using Mat4 = std::array<cplx, 16>;

inline Mat2 matmul(const Mat2& a, const Mat2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
          a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

inline Mat2 adjoint(const Mat2& a) {
  return {std::conj(a[0]), std::conj(a[2]), std::conj(a[1]), std::conj(a[3])};
}

inline Mat2 add(const Mat2& a, const Mat2& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]};
}

inline Mat2 scale(cplx s, const Mat2& a) {
  return {s * a[0], s * a[1], s * a[2], s * a[3]};
}

inline double max_abs_diff(std::span<const cplx> a, std::span<const cplx> b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

inline bool is_unitary(const Mat2& u, double tol = kChannelTol) {
  const Mat2 p = matmul(adjoint(u), u);
  const Mat2 id{1.0, 0.0, 0.0, 1.0};
  return max_abs_diff(p, id) <= tol;
}

/// Equality up to a global phase. The phase is fixed from the largest entry of `a`.
template <std::size_t N>
bool equal_up_to_phase(const std::array<cplx, N>& a, const std::array<cplx, N>& b,
                       double tol = kAlgebraTol) {
  std::size_t k = 0;
  for (std::size_t i = 1; i < N; ++i)
    if (std::abs(a[i]) > std::abs(a[k])) k = i;
  if (std::abs(a[k]) == 0.0) return max_abs_diff(a, b) <= tol;
  if (std::abs(b[k]) == 0.0) return false;
  const cplx phase = (b[k] / std::abs(b[k])) / (a[k] / std::abs(a[k]));
  double worst = 0.0;
  for (std::size_t i = 0; i < N; ++i) worst = std::max(worst, std::abs(phase * a[i] - b[i]));
  return worst <= tol;
}

namespace gates {

inline Mat2 I() { return {1.0, 0.0, 0.0, 1.0}; }
inline Mat2 X() { return {0.0, 1.0, 1.0, 0.0}; }
inline Mat2 Y() { return {0.0, cplx(0, -1), cplx(0, 1), 0.0}; }
inline Mat2 Z() { return {1.0, 0.0, 0.0, -1.0}; }
inline Mat2 H() {
  const double r = 1.0 / std::numbers::sqrt2;
  return {r, r, r, -r};
}
inline Mat2 S() { return {1.0, 0.0, 0.0, cplx(0, 1)}; }
inline Mat2 Sdg() { return {1.0, 0.0, 0.0, cplx(0, -1)}; }
inline Mat2 T() { return {1.0, 0.0, 0.0, std::polar(1.0, std::numbers::pi / 4)}; }
inline Mat2 Tdg() { return {1.0, 0.0, 0.0, std::polar(1.0, -std::numbers::pi / 4)}; }

/// exp(-i angle X / 2)
inline Mat2 Rx(double angle) {
  const double c = std::cos(angle / 2), s = std::sin(angle / 2);
  return {c, cplx(0, -s), cplx(0, -s), c};
}

/// exp(-i angle Z / 2)
inline Mat2 Rz(double angle) {
  return {std::polar(1.0, -angle / 2), 0.0, 0.0, std::polar(1.0, angle / 2)};
}

/// sigma_theta = sin(theta) Y + cos(theta) Z: the Pauli along the
/// direction at angle theta from z in the y-z plane.
inline Mat2 sigma_theta(double theta) {
  return add(scale(std::sin(theta), Y()), scale(std::cos(theta), Z()));
}

/// CNOT over the pair (control, target) in the Mat4 local basis.
inline Mat4 CNOT() {
  Mat4 m{};
  // local index = bit_control + 2 * bit_target
  m[0 * 4 + 0] = 1.0;
  m[3 * 4 + 1] = 1.0;
  m[2 * 4 + 2] = 1.0;
  m[1 * 4 + 3] = 1.0;
  return m;
}

}  // namespace gates

/// Computational-basis indices touched by an operator on `qubits`, for the
/// base index `base` (which has zeros at those bit positions).
inline void local_indices(std::size_t base, std::span<const int> qubits,
                          std::span<std::size_t> out) {
  const std::size_t k = qubits.size();
  for (std::size_t local = 0; local < (std::size_t{1} << k); ++local) {
    std::size_t idx = base;
    for (std::size_t j = 0; j < k; ++j)
      if ((local >> j) & 1U) idx |= std::size_t{1} << qubits[j];
    out[local] = idx;
  }
}

inline void check_qubits(std::span<const int> qubits, int n_qubits) {
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    if (qubits[i] < 0 || qubits[i] >= n_qubits)
      throw ValidationError("qubit index " + std::to_string(qubits[i]) + " out of range for " +
                            std::to_string(n_qubits) + " qubits");
    for (std::size_t j = 0; j < i; ++j)
      if (qubits[i] == qubits[j]) throw ValidationError("repeated qubit operand");
  }
}

inline std::size_t operand_mask(std::span<const int> qubits) {
  std::size_t mask = 0;
  for (int q : qubits) mask |= std::size_t{1} << q;
  return mask;
}

class StateVector {
 public:
  /// |0...0> on `n_qubits` qubits.
  explicit StateVector(int n_qubits) : n_(n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits)
      throw ValidationError("StateVector supports 1.." + std::to_string(kMaxQubits) + " qubits");
    amps_.assign(std::size_t{1} << n_qubits, 0.0);
    amps_[0] = 1.0;
  }

  static StateVector basis(int n_qubits, std::size_t index) {
    StateVector s(n_qubits);
    if (index >= s.amps_.size()) throw ValidationError("basis index out of range");
    s.amps_[0] = 0.0;
    s.amps_[index] = 1.0;
    return s;
  }

  static StateVector from_amplitudes(int n_qubits, std::vector<cplx> amplitudes) {
    StateVector s(n_qubits);
    if (amplitudes.size() != s.amps_.size()) throw ValidationError("amplitude count mismatch");
    s.amps_ = std::move(amplitudes);
    if (std::abs(s.norm_squared() - 1.0) > kChannelTol) throw ValidationError("state not normalized");
    return s;
  }

  int n_qubits() const { return n_; }
  std::size_t dim() const { return amps_.size(); }
  std::span<const cplx> amplitudes() const { return amps_; }
  cplx operator[](std::size_t i) const { return amps_[i]; }

  double norm_squared() const {
    double n = 0.0;
    for (const cplx& a : amps_) n += std::norm(a);
    return n;
  }

  std::vector<double> probabilities() const {
    std::vector<double> p(amps_.size());
    for (std::size_t i = 0; i < amps_.size(); ++i) p[i] = std::norm(amps_[i]);
    return p;
  }

  /// Applies a dense 2^k x 2^k row-major matrix to `qubits` (k = qubits.size()).
  void apply_matrix(std::span<const int> qubits, std::span<const cplx> matrix) {
    check_qubits(qubits, n_);
    const std::size_t local_dim = std::size_t{1} << qubits.size();
    if (matrix.size() != local_dim * local_dim) throw ValidationError("operator size mismatch");
    const std::size_t mask = operand_mask(qubits);
    std::array<std::size_t, 4> idx{};
    std::array<cplx, 4> in{};
    for (std::size_t base = 0; base < amps_.size(); ++base) {
      if (base & mask) continue;
      local_indices(base, qubits, std::span(idx.data(), local_dim));
      for (std::size_t i = 0; i < local_dim; ++i) in[i] = amps_[idx[i]];
      for (std::size_t r = 0; r < local_dim; ++r) {
        cplx acc = 0.0;
        for (std::size_t c = 0; c < local_dim; ++c) acc += matrix[r * local_dim + c] * in[c];
        amps_[idx[r]] = acc;
      }
    }
  }

 private:
  int n_;
  std::vector<cplx> amps_;
};

/// Applies a single-qubit unitary to qubit `q`.
inline StateVector apply_1q(StateVector state, const Mat2& gate, int q) {
  if (!is_unitary(gate)) throw ValidationError("gate is not unitary");
  const std::array<int, 1> qs{q};
  state.apply_matrix(qs, gate);
  return state;
}

inline StateVector apply_cnot(StateVector state, int control, int target) {
  if (control == target) throw ValidationError("CNOT control equals target");
  const std::array<int, 2> qs{control, target};
  state.apply_matrix(qs, gates::CNOT());
  return state;
}

/// Hermitian trace-one matrix over up to five qubits, stored row-major.
class DensityMatrix {
 public:
  /// |0...0><0...0|
  explicit DensityMatrix(int n_qubits) : n_(n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits)
      throw ValidationError("DensityMatrix supports 1.." + std::to_string(kMaxQubits) + " qubits");
    dim_ = std::size_t{1} << n_qubits;
    rho_.assign(dim_ * dim_, 0.0);
    rho_[0] = 1.0;
  }

  static DensityMatrix from_state(const StateVector& s) {
    DensityMatrix d(s.n_qubits());
    for (std::size_t r = 0; r < d.dim_; ++r)
      for (std::size_t c = 0; c < d.dim_; ++c) d.rho_[r * d.dim_ + c] = s[r] * std::conj(s[c]);
    return d;
  }

  /// Validates hermiticity and unit trace; positivity is the caller's contract.
  static DensityMatrix from_entries(int n_qubits, std::vector<cplx> entries) {
    DensityMatrix d(n_qubits);
    if (entries.size() != d.rho_.size()) throw ValidationError("entry count mismatch");
    d.rho_ = std::move(entries);
    if (!d.is_hermitian(kAlgebraTol)) throw ValidationError("density matrix not Hermitian");
    if (std::abs(d.trace() - 1.0) > kAlgebraTol) throw ValidationError("density matrix trace != 1");
    return d;
  }

  int n_qubits() const { return n_; }
  std::size_t dim() const { return dim_; }
  std::span<const cplx> entries() const { return rho_; }
  cplx operator()(std::size_t r, std::size_t c) const { return rho_[r * dim_ + c]; }

  double trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) t += rho_[i * dim_ + i].real();
    return t;
  }

  bool is_hermitian(double tol = kAlgebraTol) const {
    for (std::size_t r = 0; r < dim_; ++r)
      for (std::size_t c = r; c < dim_; ++c)
        if (std::abs(rho_[r * dim_ + c] - std::conj(rho_[c * dim_ + r])) > tol) return false;
    return true;
  }

  std::vector<double> probabilities() const {
    std::vector<double> p(dim_);
    for (std::size_t i = 0; i < dim_; ++i) p[i] = std::max(0.0, rho_[i * dim_ + i].real());
    return p;
  }

  /// Reduced single-qubit state of `q`.
  Mat2 reduced(int q) const {
    const std::array<int, 1> qs{q};
    check_qubits(qs, n_);
    Mat2 out{};
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t r = 0; r < dim_; ++r)
      for (std::size_t c = 0; c < dim_; ++c)
        if ((r & ~bit) == (c & ~bit))
          out[((r & bit) ? 2 : 0) + ((c & bit) ? 1 : 0)] += rho_[r * dim_ + c];
    return out;
  }

  /// rho -> sum_k K rho K^dagger with each K a dense 2^k x 2^k matrix on `qubits`.
  void apply_kraus(std::span<const int> qubits, std::span<const std::vector<cplx>> kraus) {
    check_qubits(qubits, n_);
    const std::size_t local_dim = std::size_t{1} << qubits.size();
    for (const auto& k : kraus)
      if (k.size() != local_dim * local_dim) throw ValidationError("Kraus operator size mismatch");
    const std::size_t mask = operand_mask(qubits);
    std::vector<cplx> out(rho_.size(), 0.0);
    std::array<std::size_t, 4> ri{}, ci{};
    std::array<cplx, 16> block{}, tmp{};
    for (std::size_t rb = 0; rb < dim_; ++rb) {
      if (rb & mask) continue;
      local_indices(rb, qubits, std::span(ri.data(), local_dim));
      for (std::size_t cb = 0; cb < dim_; ++cb) {
        if (cb & mask) continue;
        local_indices(cb, qubits, std::span(ci.data(), local_dim));
        for (std::size_t i = 0; i < local_dim; ++i)
          for (std::size_t j = 0; j < local_dim; ++j) block[i * local_dim + j] = rho_[ri[i] * dim_ + ci[j]];
        for (const auto& k : kraus) {
          // tmp = K * block
          for (std::size_t i = 0; i < local_dim; ++i)
            for (std::size_t j = 0; j < local_dim; ++j) {
              cplx acc = 0.0;
              for (std::size_t m = 0; m < local_dim; ++m) acc += k[i * local_dim + m] * block[m * local_dim + j];
              tmp[i * local_dim + j] = acc;
            }
          // out += tmp * K^dagger
          for (std::size_t i = 0; i < local_dim; ++i)
            for (std::size_t j = 0; j < local_dim; ++j) {
              cplx acc = 0.0;
              for (std::size_t m = 0; m < local_dim; ++m)
                acc += tmp[i * local_dim + m] * std::conj(k[j * local_dim + m]);
              out[ri[i] * dim_ + ci[j]] += acc;
            }
        }
      }
    }
    rho_ = std::move(out);
  }

  void apply_unitary(std::span<const int> qubits, std::span<const cplx> u) {
    const std::vector<std::vector<cplx>> single{std::vector<cplx>(u.begin(), u.end())};
    apply_kraus(qubits, single);
  }

 private:
  int n_;
  std::size_t dim_;
  std::vector<cplx> rho_;
};

inline DensityMatrix apply_1q(DensityMatrix dm, const Mat2& gate, int q) {
  if (!is_unitary(gate)) throw ValidationError("gate is not unitary");
  const std::array<int, 1> qs{q};
  dm.apply_unitary(qs, gate);
  return dm;
}

inline DensityMatrix apply_cnot(DensityMatrix dm, int control, int target) {
  if (control == target) throw ValidationError("CNOT control equals target");
  const std::array<int, 2> qs{control, target};
  dm.apply_unitary(qs, gates::CNOT());
  return dm;
}

/// Kraus pair {I/sqrt2, sigma_theta/sqrt2} of an unrecorded projective
/// measurement along sigma_theta. basis_angle = 0 is the z basis.
inline std::vector<std::vector<cplx>> dephasing_kraus(double basis_angle) {
  const double r = 1.0 / std::numbers::sqrt2;
  const Mat2 id = scale(r, gates::I());
  const Mat2 s = scale(r, gates::sigma_theta(basis_angle));
  return {std::vector<cplx>(id.begin(), id.end()), std::vector<cplx>(s.begin(), s.end())};
}

inline DensityMatrix dephase(DensityMatrix dm, int q, double basis_angle) {
  const std::array<int, 1> qs{q};
  dm.apply_kraus(qs, dephasing_kraus(basis_angle));
  return dm;
}

/// The same superoperator on an arbitrary 2x2 operator: (m + s m s) / 2.
inline Mat2 dephase_operator(const Mat2& m, double basis_angle) {
  const Mat2 s = gates::sigma_theta(basis_angle);
  return scale(0.5, add(m, matmul(s, matmul(m, s))));
}

/// Hermitian operator over n qubits.
class Observable {
 public:
  static Observable from_entries(int n_qubits, std::vector<cplx> entries) {
    Observable o(n_qubits);
    if (entries.size() != o.m_.size()) throw ValidationError("entry count mismatch");
    o.m_ = std::move(entries);
    for (std::size_t r = 0; r < o.dim_; ++r)
      for (std::size_t c = 0; c < o.dim_; ++c)
        if (std::abs(o.m_[r * o.dim_ + c] - std::conj(o.m_[c * o.dim_ + r])) > kAlgebraTol)
          throw ValidationError("observable not Hermitian");
    return o;
  }

  /// `factor` on qubit q, identity elsewhere.
  static Observable single(int n_qubits, const Mat2& factor, int q) {
    Observable o(n_qubits);
    const std::array<int, 1> qs{q};
    check_qubits(qs, n_qubits);
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t r = 0; r < o.dim_; ++r)
      for (std::size_t c = 0; c < o.dim_; ++c)
        if ((r & ~bit) == (c & ~bit)) o.m_[r * o.dim_ + c] = factor[((r & bit) ? 2 : 0) + ((c & bit) ? 1 : 0)];
    return from_entries(n_qubits, std::move(o.m_));
  }

  static Observable pauli_z(int n_qubits, int q) { return single(n_qubits, gates::Z(), q); }
  static Observable sigma(int n_qubits, int q, double theta) {
    return single(n_qubits, gates::sigma_theta(theta), q);
  }

  int n_qubits() const { return n_; }
  std::size_t dim() const { return dim_; }
  std::span<const cplx> entries() const { return m_; }

 private:
  explicit Observable(int n_qubits) : n_(n_qubits), dim_(std::size_t{1} << n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) throw ValidationError("bad qubit count");
    m_.assign(dim_ * dim_, 0.0);
  }
  int n_;
  std::size_t dim_;
  std::vector<cplx> m_;
};

/// Tr(obs * dm).
inline double expect(const DensityMatrix& dm, const Observable& obs) {
  if (dm.dim() != obs.dim()) throw ValidationError("observable/state dimension mismatch");
  const std::size_t d = dm.dim();
  const auto o = obs.entries();
  cplx t = 0.0;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) t += o[i * d + j] * dm(j, i);
  if (std::abs(t.imag()) > kChannelTol) throw InvariantError("expectation has imaginary part");
  return t.real();
}

// ---------------------------------------------------------------------------
// Sampling

/// Outcome string -> count. Character i of a string is qubit (n - 1 - i),
/// so the rightmost character is Q0.
using Counts = std::map<std::string, std::uint64_t>;

inline std::string outcome_string(std::size_t index, int n_qubits) {
  std::string s(static_cast<std::size_t>(n_qubits), '0');
  for (int q = 0; q < n_qubits; ++q)
    if ((index >> q) & 1U) s[static_cast<std::size_t>(n_qubits - 1 - q)] = '1';
  return s;
}

/// Bit of qubit q in an outcome string; throws if the string is too short.
inline int outcome_bit(const std::string& outcome, int q) {
  const int n = static_cast<int>(outcome.size());
  if (q < 0 || q >= n) throw ValidationError("qubit " + std::to_string(q) + " missing from outcome '" + outcome + "'");
  const char c = outcome[static_cast<std::size_t>(n - 1 - q)];
  if (c != '0' && c != '1') throw ValidationError("malformed outcome '" + outcome + "'");
  return c - '0';
}

/// Multinomial sample of `shots` draws from `probs` (indexed by basis state).
/// Uses mt19937_64 and a 53-bit mantissa draw so results are reproducible
/// across standard libraries.
inline Counts sample_counts(std::span<const double> probs, int n_qubits, std::uint64_t shots,
                            std::uint64_t seed) {
  if (shots < 1) throw ValidationError("shot count must be >= 1");
  if (probs.size() != (std::size_t{1} << n_qubits)) throw ValidationError("distribution size mismatch");
  std::vector<double> cdf(probs.size());
  double total = 0.0;
  std::size_t last_nonzero = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] < -kChannelTol) throw ValidationError("negative probability");
    total += std::max(0.0, probs[i]);
    cdf[i] = total;
    if (probs[i] > 0.0) last_nonzero = i;
  }
  if (!(total > 0.0)) throw ValidationError("distribution has no mass");

  std::mt19937_64 rng(seed);
  std::vector<std::uint64_t> hits(probs.size(), 0);
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * total;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    std::size_t k = it == cdf.end() ? last_nonzero : static_cast<std::size_t>(it - cdf.begin());
    ++hits[k];
  }
  Counts counts;
  for (std::size_t i = 0; i < hits.size(); ++i)
    if (hits[i] > 0) counts[outcome_string(i, n_qubits)] = hits[i];
  return counts;
}

inline Counts sample_shots(const StateVector& state, std::uint64_t shots, std::uint64_t seed) {
  const auto p = state.probabilities();
  return sample_counts(p, state.n_qubits(), shots, seed);
}

}  // namespace qsim
}  // namespace lgtest
