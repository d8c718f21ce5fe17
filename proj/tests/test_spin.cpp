// Copyright (C) 2026 lmgdpt contributors
// SPDX-License-Identifier: Apache-2.0
//

#include <doctest.h>

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

#include "lmgdpt/error.hpp"
#include "lmgdpt/lmg.hpp"
#include "test_support.hpp"

using namespace lmgdpt;

namespace {

double commutator_error(const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& expected) {
  return (a * b - b * a - expected).norm();
}

ComplexVector highest_weight(SpinQuantumNumber j) {
  ComplexVector v = ComplexVector::Zero(j.dim());
  v[0] = 1.0;
  return v;
}

}  // namespace

TEST_CASE("spin quantum numbers accept half-integers only") {
  CHECK(SpinQuantumNumber::from_value(2.5).twice() == 5);
  CHECK(SpinQuantumNumber::from_value(0.5).dim() == 2);
  CHECK(SpinQuantumNumber::from_value(3.0).m_at(0) == doctest::Approx(3.0));
  CHECK(SpinQuantumNumber::from_value(3.0).m_at(6) == doctest::Approx(-3.0));
  CHECK_THROWS_AS(SpinQuantumNumber::from_value(0.3), ValidationError);
  CHECK_THROWS_AS(SpinQuantumNumber::from_value(0.0), ValidationError);
  CHECK_THROWS_AS(SpinQuantumNumber::from_value(-1.0), ValidationError);
  CHECK_THROWS_AS(SpinQuantumNumber::from_twice(0), ValidationError);
}

TEST_CASE("angular momentum algebra") {
  const Complex i(0.0, 1.0);
  for (double jv : {0.5, 1.0, 3.5, 10.0, 50.0}) {
    const auto j = SpinQuantumNumber::from_value(jv);
    const AngularMomentumSet ops = build_angular_momentum(j);
    const double scale = jv * jv;
    CHECK(commutator_error(ops.jx, ops.jy, i * ops.jz) < 1e-12 * scale);
    CHECK(commutator_error(ops.jy, ops.jz, i * ops.jx) < 1e-12 * scale);
    CHECK(commutator_error(ops.jz, ops.jx, i * ops.jy) < 1e-12 * scale);
    const ComplexMatrix casimir = ops.jx * ops.jx + ops.jy * ops.jy + ops.jz * ops.jz;
    const ComplexMatrix expected = jv * (jv + 1.0) * ComplexMatrix::Identity(j.dim(), j.dim());
    CHECK((casimir - expected).norm() < 1e-11 * scale);
    CHECK((ops.jx - ops.jx.adjoint()).norm() == 0.0);
    CHECK(ops.jz(0, 0).real() == doctest::Approx(jv));
  }
}

TEST_CASE("quantum states enforce normalization") {
  ComplexVector v(2);
  v << 1.0, 1.0;
  CHECK_THROWS_AS(QuantumState{v}, ValidationError);
  const QuantumState s = QuantumState::normalized(v);
  CHECK(s.amplitudes().norm() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(QuantumState::normalized(ComplexVector::Zero(3)), ValidationError);
}

TEST_CASE("coherent states match the rotation of the highest-weight state") {
  // Oracle: dense matrix exponentials of the generators.
  const Complex i(0.0, 1.0);
  for (double jv : {0.5, 2.0, 7.5}) {
    const auto j = SpinQuantumNumber::from_value(jv);
    const AngularMomentumSet ops = build_angular_momentum(j);
    for (auto [theta, phi] : {std::pair{0.3, 1.1}, std::pair{2.0, -0.4}, std::pair{3.0, 4.0}}) {
      const ComplexMatrix ry = (-i * theta * ops.jy).exp();
      const ComplexMatrix rz = (-i * phi * ops.jz).exp();
      const ComplexVector expected = rz * ry * highest_weight(j);
      const QuantumState c = coherent_state(j, theta, phi);
      CHECK((c.amplitudes() - expected).norm() < 1e-12);
      const double jx = c.expectation(ops.jx).real();
      const double jy = c.expectation(ops.jy).real();
      const double jz = c.expectation(ops.jz).real();
      CHECK(jx == doctest::Approx(jv * std::sin(theta) * std::cos(phi)).epsilon(1e-12));
      CHECK(jy == doctest::Approx(jv * std::sin(theta) * std::sin(phi)).epsilon(1e-12));
      CHECK(jz == doctest::Approx(jv * std::cos(theta)).epsilon(1e-12));
    }
  }
}

TEST_CASE("coherent profile stays finite and normalized at large j") {
  const auto j = SpinQuantumNumber::from_value(2000.0);
  const auto hlb = half_log_binomials(j);
  for (double theta : {1e-3, 0.5, 1.5707963, 3.1}) {
    const RealVector d = coherent_profile(j, theta, hlb);
    CHECK(d.allFinite());
    // Log-binomials near ln C(4000, 2000) ~ 2770 carry ~1e-13 relative error.
    CHECK(std::abs(d.squaredNorm() - 1.0) < 1e-10);
  }
}

TEST_CASE("Hermitian eigendecomposition reconstructs its input") {
  std::mt19937_64 rng(7);
  for (Index n : {1, 2, 17, 120}) {
    const ComplexMatrix h = testing::random_hermitian(n, rng);
    const SpectralDecomposition s = hermitian_eigendecomposition(h);
    const ComplexMatrix rec = s.eigenvectors * s.eigenvalues.asDiagonal() * s.eigenvectors.adjoint();
    CHECK((rec - h).norm() < 1e-10 * h.norm());
    const ComplexMatrix gram = s.eigenvectors.adjoint() * s.eigenvectors;
    CHECK((gram - ComplexMatrix::Identity(n, n)).norm() < 1e-12 * n);
    for (Index k = 1; k < n; ++k) CHECK(s.eigenvalues[k] >= s.eigenvalues[k - 1]);
  }
  ComplexMatrix bad = ComplexMatrix::Zero(2, 2);
  bad(0, 1) = 1.0;
  CHECK_THROWS_AS(hermitian_eigendecomposition(bad), ValidationError);
}

TEST_CASE("LMG spectra reconstruct to 1e-10 |H| up to j = 500") {
  for (double jv : {10.0, 100.0, 500.0}) {
    const auto j = SpinQuantumNumber::from_value(jv);
    const ComplexMatrix h = build_hamiltonian(LmgParameters::make(j, 0.8));
    const SpectralDecomposition s = hermitian_eigendecomposition(h);
    const ComplexMatrix rec = s.eigenvectors * s.eigenvalues.asDiagonal() * s.eigenvectors.adjoint();
    CHECK((rec - h).norm() < 1e-10 * h.norm());
  }
}

TEST_CASE("Larmor precession flips the transverse spin") {
  // j = 1/2, H = Jz, x-polarized start: <Jy> goes 0 -> +1/2 at t = pi/2 -> 0 at pi; <Jx> flips sign at pi.
  const auto j = SpinQuantumNumber::from_value(0.5);
  const AngularMomentumSet ops = build_angular_momentum(j);
  const SpectralDecomposition s = hermitian_eigendecomposition(ops.jz);
  const QuantumState x_up = coherent_state(j, M_PI / 2, 0.0);
  const QuantumState quarter = evolve(x_up, s, M_PI / 2);
  CHECK(quarter.expectation(ops.jy).real() == doctest::Approx(0.5).epsilon(1e-14));
  const QuantumState half = evolve(x_up, s, M_PI);
  CHECK(half.expectation(ops.jx).real() == doctest::Approx(-0.5).epsilon(1e-14));
  const QuantumState y_up = coherent_state(j, M_PI / 2, M_PI / 2);
  CHECK(evolve(y_up, s, M_PI).expectation(ops.jy).real() == doctest::Approx(-0.5).epsilon(1e-14));
}

TEST_CASE("propagation is unitary and has the group property") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> time(-10.0, 10.0);
  const Complex i(0.0, 1.0);
  for (double jv : {3.0, 20.0}) {
    const auto j = SpinQuantumNumber::from_value(jv);
    const ComplexMatrix h = build_hamiltonian(LmgParameters::make(j, 0.37, 1.3));
    auto spec = std::make_shared<const SpectralDecomposition>(hermitian_eigendecomposition(h));
    for (int trial = 0; trial < 10; ++trial) {
      const QuantumState psi = testing::random_state(j, rng);
      const double t1 = time(rng);
      const double t2 = time(rng);
      const QuantumState a = evolve(evolve(psi, *spec, t1), *spec, t2);
      const QuantumState b = evolve(psi, *spec, t1 + t2);
      CHECK(std::abs(a.overlap(b)) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK((a.amplitudes() - b.amplitudes()).norm() < 1e-10);
      CHECK(evolve(psi, *spec, t1).amplitudes().norm() == doctest::Approx(1.0).epsilon(1e-13));
      const Propagator prop(spec, psi);
      CHECK((prop.at(t1).amplitudes() - evolve(psi, *spec, t1).amplitudes()).norm() < 1e-12);
      CHECK(prop.weights().sum() == doctest::Approx(1.0).epsilon(1e-12));
    }
    // Oracle: dense matrix exponential.
    const QuantumState psi = testing::random_state(j, rng);
    const ComplexVector expected = (-i * 1.7 * h).exp() * psi.amplitudes();
    CHECK((evolve(psi, *spec, 1.7).amplitudes() - expected).norm() < 1e-10);
  }
}
