// Copyright (C) 2026 lmgdpt contributors
// SPDX-License-Identifier: Apache-2.0
//
// Loschmidt amplitudes of LMG quenches in arbitrary-precision arithmetic.
//
// H commutes with the parity diag((-1)^k), so each parity sector is a
// tridiagonal matrix. The ground state of H(h0) in each sector is obtained by
// inverse iteration, and the final sector Hamiltonians are diagonalized by
// implicit QL with the rotations applied to the initial vector only. The
// return amplitude of an initial state with parity weights (p_e, p_o) is then
//   A(t) = p_e sum_n w_n^e e^{-i E_n^e t} + p_o sum_n w_n^o e^{-i E_n^o t}.
//
// Double precision cannot resolve echoes below roughly 1e-27 because the
// spectral sum cancels to that level; at j of a few hundred the interesting
// part of the rate function lies far below it.

#ifndef LMGDPT_PARITY_ECHO_HPP
#define LMGDPT_PARITY_ECHO_HPP

#include <memory>
#include <vector>

#include "lmgdpt/lmg.hpp"

namespace lmgdpt {

struct ParityWeights {
  double even;
  double odd;
};

class ExtendedPrecisionEcho {
 public:
  static constexpr int kDefaultBits = 576;

  /// Same j and gamma_x required. bits <= 0 selects kDefaultBits.
  ExtendedPrecisionEcho(const LmgParameters& initial, const LmgParameters& final_params, int bits = 0);
  ~ExtendedPrecisionEcho();
  ExtendedPrecisionEcho(const ExtendedPrecisionEcho&) = delete;
  ExtendedPrecisionEcho& operator=(const ExtendedPrecisionEcho&) = delete;

  int bits() const noexcept { return bits_; }

  /// ln L(t_k) on t_k = k t_max / (n_t - 1). Weights must be non-negative and
  /// sum to one.
  std::vector<double> log_echo(ParityWeights weights, double t_max, Index n_t) const;

  /// ln of the smallest echo the arithmetic resolves on an n_t-point grid.
  double log_floor(Index n_t) const;

  /// Sector eigenvalues of H(h), rounded to double (ascending).
  std::vector<double> sector_energies(int parity) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int bits_;
};

}  // namespace lmgdpt

#endif  // LMGDPT_PARITY_ECHO_HPP
