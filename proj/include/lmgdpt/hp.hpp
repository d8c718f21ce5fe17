// Copyright (C) 2026 lmgdpt contributors
// SPDX-License-Identifier: Apache-2.0
//
// Holstein-Primakoff (quadratic boson) description of LMG quenches: rotation
// angle, gap, squeezing and displacement of the ground state, and closed-form
// echo and rate function.

#ifndef LMGDPT_HP_HPP
#define LMGDPT_HP_HPP

#include <string>

namespace lmgdpt {

struct HpParameters {
  double theta_h;
  double omega_h;
  double xi_h;
  double alpha_h;
};

/// Form of the echo exponent.
///   as_printed:       dtheta e^{-2 xi0} / (1 + 4 e^{dxi} cot^2(w t / 2))
///   squared:          dtheta^2 e^{-2 xi0} / (1 + 4 e^{dxi} cot^2(w t / 2))
///   gaussian_overlap: dtheta^2 e^{-2 xi0} s^2 (s^2 + e^{-4 dxi} c^2) / D,
///                     s = sin(w t / 2), c = cos(w t / 2),
///                     D = cos^2(w t) + cosh^2(2 dxi) sin^2(w t)
/// with dtheta = theta_h - theta_h0 and dxi = xi_h - xi_h0. The last one is the
/// exact overlap of two displaced squeezed vacua under the quadratic Hamiltonian.
enum class ExponentReading { as_printed, squared, gaussian_overlap };

std::string to_string(ExponentReading r);
ExponentReading parse_exponent_reading(const std::string& text);

/// arccos(h/gamma_x) below the critical field, 0 above.
double hp_theta(double h, double gamma_x);
/// sqrt(gamma_x^2 - h^2) below, sqrt(h (h - gamma_x)) above.
double hp_omega(double h, double gamma_x);
/// -1/4 ln(1 - h^2/gamma_x^2) below, -1/4 ln(1 - gamma_x/h) above.
/// Throws ValidationError at h = gamma_x where it diverges.
double hp_xi(double h, double gamma_x);

struct HpGroundState {
  double alpha_h;  // -sqrt(2j) theta_h / 2
  double xi_h;
};

HpGroundState hp_ground_state_descriptor(double j, double h, double gamma_x);
HpParameters hp_parameters(double j, double h, double gamma_x);

/// Echo including the 1/sqrt(D) squeezing prefactor. Throws ValidationError if
/// either field is critical.
double hp_loschmidt(double j, double h0, double h, double gamma_x, double t,
                    ExponentReading reading = ExponentReading::gaussian_overlap);
/// Large-j rate function (the prefactor is subleading in 1/j).
double hp_rate(double h0, double h, double gamma_x, double t,
               ExponentReading reading = ExponentReading::gaussian_overlap);

}  // namespace lmgdpt

#endif  // LMGDPT_HP_HPP
