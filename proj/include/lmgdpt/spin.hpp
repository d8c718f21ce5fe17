// Copyright (C) 2026 lmgdpt contributors
// SPDX-License-Identifier: Apache-2.0
//
// Fixed-j angular momentum algebra, spin coherent states, dense Hermitian
// diagonalization and spectral time propagation.
//
// Basis convention used everywhere in the library: index k = 0 .. 2j labels
// |j, m = j - k>, i.e. amplitudes run from m = j down to m = -j.

#ifndef LMGDPT_SPIN_HPP
#define LMGDPT_SPIN_HPP

#include <complex>
#include <memory>
#include <vector>

#include <Eigen/Dense>

namespace lmgdpt {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Total spin j in {1/2, 1, 3/2, ...}. Stored as the integer 2j.
class SpinQuantumNumber {
 public:
  static SpinQuantumNumber from_twice(int twice_j);
  /// Accepts values within 1e-9 of a positive half-integer.
  static SpinQuantumNumber from_value(double j);

  double value() const noexcept { return 0.5 * twice_; }
  int twice() const noexcept { return twice_; }
  Index dim() const noexcept { return twice_ + 1; }
  /// Magnetic quantum number of basis index k.
  double m_at(Index k) const noexcept { return value() - static_cast<double>(k); }

  friend bool operator==(SpinQuantumNumber, SpinQuantumNumber) = default;

 private:
  explicit SpinQuantumNumber(int twice_j) : twice_(twice_j) {}
  int twice_;
};

struct AngularMomentumSet {
  SpinQuantumNumber j;
  ComplexMatrix jx;
  ComplexMatrix jy;
  ComplexMatrix jz;
};

/// Normalized pure state in the |j,m> basis.
class QuantumState {
 public:
  /// Throws ValidationError unless the vector has unit norm within 1e-12.
  explicit QuantumState(ComplexVector amplitudes);
  /// Rescales to unit norm; throws on a zero vector.
  static QuantumState normalized(ComplexVector amplitudes);

  const ComplexVector& amplitudes() const noexcept { return amplitudes_; }
  Index dim() const noexcept { return amplitudes_.size(); }
  /// <this|other>
  Complex overlap(const QuantumState& other) const;
  /// <this|op|this>
  Complex expectation(const ComplexMatrix& op) const;

 private:
  ComplexVector amplitudes_;
};

struct SpectralDecomposition {
  RealVector eigenvalues;       // ascending
  ComplexMatrix eigenvectors;   // columns are eigenstates

  Index dim() const noexcept { return eigenvalues.size(); }
};

AngularMomentumSet build_angular_momentum(SpinQuantumNumber j);

/// 0.5 * ln C(2j, j+m) for every basis index, via cumulative log-factorials.
std::vector<double> half_log_binomials(SpinQuantumNumber j);

/// Real Wigner-d column d^j_{m,j}(theta) for every basis index, evaluated in
/// log space so that j in the thousands neither overflows nor underflows
/// prematurely. `half_log_binom` must come from half_log_binomials(j).
RealVector coherent_profile(SpinQuantumNumber j, double theta,
                            const std::vector<double>& half_log_binom);

/// |theta, phi> = exp(-i phi Jz) exp(-i theta Jy) |j, j>.
/// Amplitude phase convention: c_m = d^j_{m,j}(theta) e^{-i m phi}, so c_j is
/// real and positive at phi = 0. phi is redundant at both poles.
QuantumState coherent_state(SpinQuantumNumber j, double theta, double phi);

/// Eigen-decomposition of a dense Hermitian matrix. The input is symmetrized
/// first; an input further than 1e-12 (relative) from Hermitian is rejected.
/// Purely real input is routed through the real symmetric solver.
/// Throws NumericalError (carrying the reconstruction residual) if the
/// iteration does not converge.
SpectralDecomposition hermitian_eigendecomposition(const ComplexMatrix& h);

/// V diag(e^{-i E t}) V^dagger psi0.
QuantumState evolve(const QuantumState& psi0, const SpectralDecomposition& spec, double t);

/// Caches the spectral coefficients V^dagger psi0 so that many time points
/// cost one matrix-vector product each.
class Propagator {
 public:
  Propagator(std::shared_ptr<const SpectralDecomposition> spec, const QuantumState& psi0);

  QuantumState at(double t) const;
  /// Squared spectral weights |<v_k|psi0>|^2.
  RealVector weights() const;
  const SpectralDecomposition& spectrum() const noexcept { return *spec_; }

 private:
  std::shared_ptr<const SpectralDecomposition> spec_;
  ComplexVector coefficients_;
};

}  // namespace lmgdpt

#endif  // LMGDPT_SPIN_HPP
