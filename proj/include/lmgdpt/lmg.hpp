// Copyright (C) 2026 lmgdpt contributors
// SPDX-License-Identifier: Apache-2.0
//
// Lipkin-Meshkov-Glick Hamiltonian H = -h Jz - (gamma_x / 2j) Jx^2, ground
// multiplets, quench setup and the classical (large-j) energy landscape.

#ifndef LMGDPT_LMG_HPP
#define LMGDPT_LMG_HPP

#include <optional>
#include <string>
#include <vector>

#include "lmgdpt/spin.hpp"

namespace lmgdpt {

struct LmgParameters {
  SpinQuantumNumber j;
  double h;
  double gamma_x;

  /// Throws ValidationError unless h >= 0 and gamma_x > 0 (both finite).
  static LmgParameters make(SpinQuantumNumber j, double h, double gamma_x = 1.0);
};

struct GroundMultiplet {
  std::vector<QuantumState> states;
  std::vector<double> energies;
  double gap_to_rest;
  double degeneracy_threshold;

  int g() const noexcept { return static_cast<int>(states.size()); }
};

struct InitialStateChoice {
  enum class Kind { eigenstate_index, symmetric_superposition, automatic };
  Kind kind = Kind::automatic;
  int index = 0;

  static InitialStateChoice eigenstate(int alpha) { return {Kind::eigenstate_index, alpha}; }
  static InitialStateChoice superposition() { return {Kind::symmetric_superposition, 0}; }
  static InitialStateChoice automatic() { return {Kind::automatic, 0}; }

  /// "auto", "superposition" or "ground:<alpha>".
  static InitialStateChoice parse(const std::string& text);
  std::string to_string() const;
};

struct QuenchProtocol {
  double h0;
  double h;
  double t_max;
  Index n_t;
  InitialStateChoice initial;
};

/// Dense H = -h Jz - gamma_x/(2j) Jx Jx. Real and pentadiagonal.
ComplexMatrix build_hamiltonian(const LmgParameters& p);
ComplexMatrix build_hamiltonian(const LmgParameters& p, const AngularMomentumSet& ops);

/// e^{i pi (Jz + j)} = diag((-1)^k). H commutes with it.
RealVector parity_diagonal(SpinQuantumNumber j);

/// 1e-8 |E0| + 1e-12.
double default_degeneracy_threshold(double ground_energy);

/// All lowest eigenstates within `threshold` of the minimum eigenvalue, capped
/// at two with a warning. A degenerate pair is rotated into the eigenbasis of
/// Jx restricted to the pair: states[0] has <Jx> > 0, states[1] has <Jx> < 0,
/// and each has a real positive amplitude on m = j. With this phase choice
/// (states[0] + states[1]) lies in the even-parity sector.
/// Throws ValidationError if threshold <= 0, if every eigenvalue qualifies, or
/// if the gap above the multiplet is below 2 * threshold.
GroundMultiplet ground_multiplet(const ComplexMatrix& h, double threshold);
GroundMultiplet ground_multiplet(const SpectralDecomposition& spec, const AngularMomentumSet& ops,
                                 double threshold);

/// `automatic` selects the symmetric superposition when g = 2 and the unique
/// ground state otherwise. Throws ValidationError on an index out of range or
/// a superposition requested with g = 1.
QuantumState initial_state(const GroundMultiplet& multiplet, InitialStateChoice choice);

/// Energy per spin E/j = -h cos(theta) - (gamma_x/2) sin^2(theta) cos^2(phi).
double classical_energy(double theta, double phi, double h, double gamma_x);

struct ClassicalMinimum {
  double theta;
  double magnetization;
};

ClassicalMinimum classical_minimizer(double h, double gamma_x);

/// t_k = k t_max / (n_t - 1), k = 0 .. n_t-1.
RealVector uniform_times(double t_max, Index n_t);

/// psi_0 from the ground multiplet of H(h0), evolved under H(h) on the
/// protocol's uniform grid.
std::vector<QuantumState> quenched_states(const QuenchProtocol& protocol, const LmgParameters& initial,
                                          const LmgParameters& final_params);

}  // namespace lmgdpt

#endif  // LMGDPT_LMG_HPP
