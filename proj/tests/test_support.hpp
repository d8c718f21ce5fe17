// Copyright (C) 2026 lmgdpt contributors
// SPDX-License-Identifier: Apache-2.0
//
// Shared helpers for the unit tests.

#ifndef LMGDPT_TEST_SUPPORT_HPP
#define LMGDPT_TEST_SUPPORT_HPP

#include <random>

#include "lmgdpt/spin.hpp"

namespace lmgdpt::testing {

inline QuantumState random_state(SpinQuantumNumber j, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  ComplexVector v(j.dim());
  for (Index k = 0; k < v.size(); ++k) v[k] = Complex(gauss(rng), gauss(rng));
  return QuantumState::normalized(v);
}

inline ComplexMatrix random_hermitian(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  ComplexMatrix a(n, n);
  for (Index r = 0; r < n; ++r) {
    for (Index c = 0; c < n; ++c) a(r, c) = Complex(gauss(rng), gauss(rng));
  }
  return 0.5 * (a + a.adjoint());
}

}  // namespace lmgdpt::testing

#endif  // LMGDPT_TEST_SUPPORT_HPP
