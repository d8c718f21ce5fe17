// Copyright (C) 2026 lmgdpt contributors
// SPDX-License-Identifier: Apache-2.0
//

#include "lmgdpt/lmg.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "lmgdpt/error.hpp"

namespace lmgdpt {

namespace {

// Rotates a state so that its amplitude on m = j (or, failing that, its
// largest amplitude) is real and positive.
ComplexVector fix_phase(ComplexVector v) {
  Index pivot = 0;
  if (std::abs(v[0]) < 1e-300) v.cwiseAbs().maxCoeff(&pivot);
  const Complex a = v[pivot];
  if (std::abs(a) > 0.0) v *= std::conj(a) / std::abs(a);
  return v;
}

}  // namespace

LmgParameters LmgParameters::make(SpinQuantumNumber j, double h, double gamma_x) {
  if (!std::isfinite(h) || h < 0.0) {
    throw ValidationError("lmg: field h must be finite and non-negative");
  }
  if (!std::isfinite(gamma_x) || gamma_x <= 0.0) {
    throw ValidationError("lmg: coupling gamma_x must be finite and positive");
  }
  return LmgParameters{j, h, gamma_x};
}

InitialStateChoice InitialStateChoice::parse(const std::string& text) {
  if (text == "auto") return automatic();
  if (text == "superposition") return superposition();
  const std::string prefix = "ground:";
  if (text.rfind(prefix, 0) == 0) {
    const std::string rest = text.substr(prefix.size());
    if (!rest.empty() && rest.find_first_not_of("0123456789") == std::string::npos && rest.size() < 4) {
      return eigenstate(std::stoi(rest));
    }
  }
  throw ValidationError("initial_state: expected auto, superposition or ground:<index>, got '" + text + "'");
}

std::string InitialStateChoice::to_string() const {
  switch (kind) {
    case Kind::eigenstate_index:
      return "ground:" + std::to_string(index);
    case Kind::symmetric_superposition:
      return "superposition";
    case Kind::automatic:
      break;
  }
  return "auto";
}

ComplexMatrix build_hamiltonian(const LmgParameters& p) {
  const SpinQuantumNumber j = p.j;
  const Index dim = j.dim();
  const double jj = j.value() * (j.value() + 1.0);
  const double c = p.gamma_x / (2.0 * j.value());
  auto jplus = [jj](double m) { return std::sqrt(std::max(0.0, jj - m * (m + 1.0))); };

  // Jx^2 = (J+^2 + J-^2 + 2 (J^2 - Jz^2)) / 4.
  ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
  for (Index k = 0; k < dim; ++k) {
    const double m = j.m_at(k);
    h(k, k) = -p.h * m - c * 0.5 * (jj - m * m);
    if (k + 2 < dim) {
      // <m|J+^2|m-2> with m-2 at index k+2.
      const double v = -c * 0.25 * jplus(m - 2.0) * jplus(m - 1.0);
      h(k, k + 2) = v;
      h(k + 2, k) = v;
    }
  }
  return h;
}

ComplexMatrix build_hamiltonian(const LmgParameters& p, const AngularMomentumSet& ops) {
  if (!(ops.j == p.j)) throw ValidationError("lmg: operator set built for a different j");
  return -p.h * ops.jz - (p.gamma_x / (2.0 * p.j.value())) * (ops.jx * ops.jx);
}

RealVector parity_diagonal(SpinQuantumNumber j) {
  RealVector p(j.dim());
  for (Index k = 0; k < j.dim(); ++k) p[k] = (k % 2 == 0) ? 1.0 : -1.0;
  return p;
}

double default_degeneracy_threshold(double ground_energy) {
  return 1e-8 * std::abs(ground_energy) + 1e-12;
}

GroundMultiplet ground_multiplet(const ComplexMatrix& h, double threshold) {
  const Index dim = h.rows();
  if (dim < 2) throw ValidationError("ground_multiplet: matrix too small");
  const SpinQuantumNumber j = SpinQuantumNumber::from_twice(static_cast<int>(dim - 1));
  return ground_multiplet(hermitian_eigendecomposition(h), build_angular_momentum(j), threshold);
}

GroundMultiplet ground_multiplet(const SpectralDecomposition& spec, const AngularMomentumSet& ops,
                                 double threshold) {
  if (!(threshold > 0.0) || !std::isfinite(threshold)) {
    throw ValidationError("ground_multiplet: degeneracy threshold must be positive");
  }
  const Index dim = spec.dim();
  if (ops.jx.rows() != dim) throw ValidationError("ground_multiplet: operator dimension mismatch");

  const RealVector& e = spec.eigenvalues;
  Index count = 1;
  while (count < dim && e[count] - e[0] <= threshold) ++count;
  if (count == dim) {
    std::ostringstream msg;
    msg << "ground_multiplet: threshold " << threshold << " covers the whole spectrum (width " << e[dim - 1] - e[0]
        << ")";
    throw ValidationError(msg.str());
  }
  const double gap = e[count] - e[0];
  if (gap < 2.0 * threshold) {
    std::ostringstream msg;
    msg << "ground_multiplet: gap " << gap << " above the multiplet is below twice the threshold " << threshold;
    throw ValidationError(msg.str());
  }
  int g = static_cast<int>(count);
  if (g > 2) {
    log_warning("ground_multiplet: " + std::to_string(g) + " states within threshold; keeping the lowest two");
    g = 2;
  }

  GroundMultiplet out{{}, {}, gap, threshold};
  if (g == 1) {
    out.states.push_back(QuantumState::normalized(fix_phase(spec.eigenvectors.col(0))));
    out.energies.push_back(e[0]);
    return out;
  }

  const ComplexMatrix u = spec.eigenvectors.leftCols(2);
  const Eigen::Matrix2cd m = u.adjoint() * ops.jx * u;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> solver(0.5 * (m + m.adjoint()));
  ComplexMatrix rotated = u;
  if (solver.info() == Eigen::Success && solver.eigenvalues()[1] - solver.eigenvalues()[0] > 1e-12) {
    // Ascending eigenvalues: column 1 is <Jx> > 0.
    rotated.col(0) = u * solver.eigenvectors().col(1);
    rotated.col(1) = u * solver.eigenvectors().col(0);
  }
  for (int a = 0; a < 2; ++a) {
    const ComplexVector v = fix_phase(rotated.col(a));
    const ComplexVector coeff = spec.eigenvectors.adjoint() * v;
    out.energies.push_back(coeff.cwiseAbs2().dot(e) / coeff.squaredNorm());
    out.states.push_back(QuantumState::normalized(v));
  }
  return out;
}

QuantumState initial_state(const GroundMultiplet& multiplet, InitialStateChoice choice) {
  const int g = multiplet.g();
  if (choice.kind == InitialStateChoice::Kind::automatic) {
    choice = g == 2 ? InitialStateChoice::superposition() : InitialStateChoice::eigenstate(0);
  }
  if (choice.kind == InitialStateChoice::Kind::symmetric_superposition) {
    if (g < 2) throw ValidationError("initial_state: superposition requires a two-fold ground multiplet");
    return QuantumState::normalized(multiplet.states[0].amplitudes() + multiplet.states[1].amplitudes());
  }
  if (choice.index < 0 || choice.index >= g) {
    throw ValidationError("initial_state: ground index " + std::to_string(choice.index) +
                          " out of range for multiplet of size " + std::to_string(g));
  }
  return multiplet.states[choice.index];
}

double classical_energy(double theta, double phi, double h, double gamma_x) {
  const double s = std::sin(theta);
  const double c = std::cos(phi);
  return -h * std::cos(theta) - 0.5 * gamma_x * s * s * c * c;
}

ClassicalMinimum classical_minimizer(double h, double gamma_x) {
  if (!(h >= 0.0) || !(gamma_x > 0.0)) {
    throw ValidationError("classical_minimizer: requires h >= 0 and gamma_x > 0");
  }
  if (h >= gamma_x) return {0.0, 0.0};
  const double r = h / gamma_x;
  return {std::acos(r), std::sqrt(1.0 - r * r)};
}

RealVector uniform_times(double t_max, Index n_t) {
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw ValidationError("time grid: t_max must be positive");
  if (n_t < 2) throw ValidationError("time grid: n_t must be at least 2");
  RealVector t(n_t);
  for (Index k = 0; k < n_t; ++k) t[k] = t_max * static_cast<double>(k) / static_cast<double>(n_t - 1);
  return t;
}

std::vector<QuantumState> quenched_states(const QuenchProtocol& protocol, const LmgParameters& initial,
                                          const LmgParameters& final_params) {
  if (!(initial.j == final_params.j) || initial.gamma_x != final_params.gamma_x) {
    throw ValidationError("quenched_states: initial and final parameters differ in j or gamma_x");
  }
  if (initial.h != protocol.h0 || final_params.h != protocol.h) {
    throw ValidationError("quenched_states: parameter fields do not match the protocol");
  }
  const RealVector times = uniform_times(protocol.t_max, protocol.n_t);
  const AngularMomentumSet ops = build_angular_momentum(initial.j);
  const SpectralDecomposition spec0 = hermitian_eigendecomposition(build_hamiltonian(initial));
  const GroundMultiplet gm = ground_multiplet(spec0, ops, default_degeneracy_threshold(spec0.eigenvalues[0]));
  const QuantumState psi0 = initial_state(gm, protocol.initial);

  auto spec1 = std::make_shared<const SpectralDecomposition>(
      hermitian_eigendecomposition(build_hamiltonian(final_params)));
  const Propagator prop(spec1, psi0);
  std::vector<QuantumState> out;
  out.reserve(times.size());
  for (Index k = 0; k < times.size(); ++k) out.push_back(prop.at(times[k]));
  return out;
}

}  // namespace lmgdpt
