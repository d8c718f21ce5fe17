// Copyright (C) 2026 lmgdpt contributors
// SPDX-License-Identifier: Apache-2.0
//

#include "lmgdpt/spin.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "lmgdpt/error.hpp"

namespace lmgdpt {

namespace {

constexpr double kNormTolerance = 1e-12;
constexpr double kHermitianTolerance = 1e-12;

}  // namespace

SpinQuantumNumber SpinQuantumNumber::from_twice(int twice_j) {
  if (twice_j < 1) {
    throw ValidationError("spin: 2j must be a positive integer, got " + std::to_string(twice_j));
  }
  return SpinQuantumNumber(twice_j);
}

SpinQuantumNumber SpinQuantumNumber::from_value(double j) {
  const double twice = 2.0 * j;
  const double rounded = std::round(twice);
  if (!std::isfinite(j) || std::abs(twice - rounded) > 1e-9 || rounded < 1.0 || rounded > 1e7) {
    std::ostringstream msg;
    msg << "spin: j = " << j << " is not a positive half-integer";
    throw ValidationError(msg.str());
  }
  return SpinQuantumNumber(static_cast<int>(rounded));
}

QuantumState::QuantumState(ComplexVector amplitudes) : amplitudes_(std::move(amplitudes)) {
  const double norm = amplitudes_.norm();
  if (std::abs(norm - 1.0) > kNormTolerance) {
    std::ostringstream msg;
    msg << "state: norm " << norm << " differs from 1 by more than " << kNormTolerance;
    throw ValidationError(msg.str());
  }
}

QuantumState QuantumState::normalized(ComplexVector amplitudes) {
  const double norm = amplitudes.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw ValidationError("state: cannot normalize a zero or non-finite vector");
  }
  amplitudes /= norm;
  return QuantumState(std::move(amplitudes));
}

Complex QuantumState::overlap(const QuantumState& other) const {
  if (other.dim() != dim()) {
    throw ValidationError("state: overlap between states of different dimension");
  }
  return amplitudes_.dot(other.amplitudes_);
}

Complex QuantumState::expectation(const ComplexMatrix& op) const {
  if (op.rows() != dim() || op.cols() != dim()) {
    throw ValidationError("state: operator dimension mismatch");
  }
  return amplitudes_.dot(op * amplitudes_);
}

AngularMomentumSet build_angular_momentum(SpinQuantumNumber j) {
  const Index dim = j.dim();
  const double jj = j.value() * (j.value() + 1.0);

  // J+ |m> = sqrt(j(j+1) - m(m+1)) |m+1>; |m+1> sits one index above |m>.
  ComplexMatrix jplus = ComplexMatrix::Zero(dim, dim);
  for (Index k = 1; k < dim; ++k) {
    const double m = j.m_at(k);
    jplus(k - 1, k) = std::sqrt(jj - m * (m + 1.0));
  }
  const ComplexMatrix jminus = jplus.adjoint();

  ComplexMatrix jz = ComplexMatrix::Zero(dim, dim);
  for (Index k = 0; k < dim; ++k) jz(k, k) = j.m_at(k);

  return AngularMomentumSet{
      j,
      0.5 * (jplus + jminus),
      Complex(0.0, -0.5) * (jplus - jminus),
      std::move(jz),
  };
}

std::vector<double> half_log_binomials(SpinQuantumNumber j) {
  const int n = j.twice();
  std::vector<double> log_factorial(n + 1, 0.0);
  for (int i = 2; i <= n; ++i) log_factorial[i] = log_factorial[i - 1] + std::log(static_cast<double>(i));

  std::vector<double> out(n + 1);
  // Index k <-> m = j - k, so j + m = n - k.
  for (int k = 0; k <= n; ++k) {
    out[k] = 0.5 * (log_factorial[n] - log_factorial[n - k] - log_factorial[k]);
  }
  return out;
}

RealVector coherent_profile(SpinQuantumNumber j, double theta,
                            const std::vector<double>& half_log_binom) {
  const int n = j.twice();
  const double log_c = std::log(std::cos(0.5 * theta));
  const double log_s = std::log(std::sin(0.5 * theta));
  RealVector d(n + 1);
  for (int k = 0; k <= n; ++k) {
    // cos^{j+m} sin^{j-m} with j+m = n-k and j-m = k; a zero power is exactly 1
    // even when the base vanishes at a pole.
    double e = half_log_binom[k];
    if (n - k > 0) e += (n - k) * log_c;
    if (k > 0) e += k * log_s;
    d[k] = std::exp(e);
  }
  return d;
}

QuantumState coherent_state(SpinQuantumNumber j, double theta, double phi) {
  if (!(theta >= 0.0 && theta <= M_PI) || !std::isfinite(phi)) {
    throw ValidationError("coherent_state: theta must lie in [0, pi] and phi must be finite");
  }
  const RealVector d = coherent_profile(j, theta, half_log_binomials(j));
  ComplexVector amps(j.dim());
  for (Index k = 0; k < j.dim(); ++k) {
    amps[k] = d[k] * std::polar(1.0, -j.m_at(k) * phi);
  }
  // The profile is normalized analytically; renormalize away rounding only.
  return QuantumState::normalized(std::move(amps));
}

SpectralDecomposition hermitian_eigendecomposition(const ComplexMatrix& h) {
  if (h.rows() != h.cols() || h.rows() == 0) {
    throw ValidationError("eigendecomposition: matrix must be square and non-empty");
  }
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  const double asym = (h - h.adjoint()).cwiseAbs().maxCoeff();
  if (asym > kHermitianTolerance * scale) {
    std::ostringstream msg;
    msg << "eigendecomposition: input deviates from Hermitian by " << asym;
    throw ValidationError(msg.str());
  }
  const ComplexMatrix sym = 0.5 * (h + h.adjoint());

  SpectralDecomposition out;
  Eigen::ComputationInfo info;
  if (sym.imag().cwiseAbs().maxCoeff() == 0.0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym.real());
    info = solver.info();
    out.eigenvalues = solver.eigenvalues();
    out.eigenvectors = solver.eigenvectors().cast<Complex>();
  } else {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
    info = solver.info();
    out.eigenvalues = solver.eigenvalues();
    out.eigenvectors = solver.eigenvectors();
  }

  if (info != Eigen::Success) {
    double residual = std::numeric_limits<double>::infinity();
    if (out.eigenvectors.allFinite() && out.eigenvalues.allFinite()) {
      residual = (out.eigenvectors * out.eigenvalues.asDiagonal() * out.eigenvectors.adjoint() - sym).norm();
    }
    std::ostringstream msg;
    msg << "eigendecomposition: QL iteration did not converge (residual norm " << residual << ")";
    throw NumericalError(msg.str(), residual);
  }
  return out;
}

QuantumState evolve(const QuantumState& psi0, const SpectralDecomposition& spec, double t) {
  if (psi0.dim() != spec.dim()) {
    throw ValidationError("evolve: state and spectrum dimensions differ");
  }
  ComplexVector c = spec.eigenvectors.adjoint() * psi0.amplitudes();
  for (Index k = 0; k < c.size(); ++k) c[k] *= std::polar(1.0, -spec.eigenvalues[k] * t);
  return QuantumState::normalized(spec.eigenvectors * c);
}

Propagator::Propagator(std::shared_ptr<const SpectralDecomposition> spec, const QuantumState& psi0)
    : spec_(std::move(spec)) {
  if (!spec_ || psi0.dim() != spec_->dim()) {
    throw ValidationError("propagator: state and spectrum dimensions differ");
  }
  coefficients_ = spec_->eigenvectors.adjoint() * psi0.amplitudes();
}

QuantumState Propagator::at(double t) const {
  ComplexVector c = coefficients_;
  for (Index k = 0; k < c.size(); ++k) c[k] *= std::polar(1.0, -spec_->eigenvalues[k] * t);
  return QuantumState::normalized(spec_->eigenvectors * c);
}

RealVector Propagator::weights() const { return coefficients_.cwiseAbs2(); }

}  // namespace lmgdpt
