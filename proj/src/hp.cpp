// Copyright (C) 2026 lmgdpt contributors
// SPDX-License-Identifier: Apache-2.0
//

#include "lmgdpt/hp.hpp"

#include <cmath>

#include "lmgdpt/error.hpp"

namespace lmgdpt {

namespace {

// |sin(w t / 2)| below this is treated as an exact revival.
constexpr double kRevivalTolerance = 1e-8;

void check_field(double h, double gamma_x) {
  if (!std::isfinite(h) || h < 0.0) throw ValidationError("hp: field must be finite and non-negative");
  if (!std::isfinite(gamma_x) || gamma_x <= 0.0) throw ValidationError("hp: gamma_x must be positive");
}

struct Exponent {
  double rate;         // exponent per unit N
  double log_prefactor;
};

Exponent exponent(double h0, double h, double gamma_x, double t, ExponentReading reading) {
  const double dtheta = hp_theta(h, gamma_x) - hp_theta(h0, gamma_x);
  const double xi0 = hp_xi(h0, gamma_x);
  const double dxi = hp_xi(h, gamma_x) - xi0;
  const double wt = hp_omega(h, gamma_x) * t;
  const double s = std::sin(0.5 * wt);
  const double c = std::cos(0.5 * wt);
  const double d = std::pow(std::cos(wt), 2) + std::pow(std::cosh(2.0 * dxi) * std::sin(wt), 2);
  Exponent out{0.0, -0.5 * std::log(d)};
  if (std::abs(s) < kRevivalTolerance) return out;
  switch (reading) {
    case ExponentReading::as_printed:
    case ExponentReading::squared: {
      const double amplitude = reading == ExponentReading::squared ? dtheta * dtheta : dtheta;
      // 1 / (1 + 4 e^{dxi} cot^2) = s^2 / (s^2 + 4 e^{dxi} c^2)
      out.rate = amplitude * std::exp(-2.0 * xi0) * s * s / (s * s + 4.0 * std::exp(dxi) * c * c);
      break;
    }
    case ExponentReading::gaussian_overlap:
      out.rate = dtheta * dtheta * std::exp(-2.0 * xi0) * s * s * (s * s + std::exp(-4.0 * dxi) * c * c) / d;
      break;
  }
  return out;
}

}  // namespace

std::string to_string(ExponentReading r) {
  switch (r) {
    case ExponentReading::as_printed:
      return "as_printed";
    case ExponentReading::squared:
      return "squared";
    case ExponentReading::gaussian_overlap:
      break;
  }
  return "gaussian_overlap";
}

ExponentReading parse_exponent_reading(const std::string& text) {
  if (text == "as_printed") return ExponentReading::as_printed;
  if (text == "squared") return ExponentReading::squared;
  if (text == "gaussian_overlap") return ExponentReading::gaussian_overlap;
  throw ValidationError("exponent_reading: expected as_printed, squared or gaussian_overlap, got '" + text + "'");
}

double hp_theta(double h, double gamma_x) {
  check_field(h, gamma_x);
  return h < gamma_x ? std::acos(h / gamma_x) : 0.0;
}

double hp_omega(double h, double gamma_x) {
  check_field(h, gamma_x);
  return h < gamma_x ? std::sqrt(gamma_x * gamma_x - h * h) : std::sqrt(h * (h - gamma_x));
}

double hp_xi(double h, double gamma_x) {
  check_field(h, gamma_x);
  if (h == gamma_x) throw ValidationError("hp: squeezing diverges at the critical field h = gamma_x");
  if (h < gamma_x) return -0.25 * std::log1p(-(h * h) / (gamma_x * gamma_x));
  return -0.25 * std::log1p(-gamma_x / h);
}

HpGroundState hp_ground_state_descriptor(double j, double h, double gamma_x) {
  if (!(j > 0.0)) throw ValidationError("hp: j must be positive");
  return {-std::sqrt(2.0 * j) * hp_theta(h, gamma_x) / 2.0, hp_xi(h, gamma_x)};
}

HpParameters hp_parameters(double j, double h, double gamma_x) {
  const HpGroundState gs = hp_ground_state_descriptor(j, h, gamma_x);
  return {hp_theta(h, gamma_x), hp_omega(h, gamma_x), gs.xi_h, gs.alpha_h};
}

double hp_loschmidt(double j, double h0, double h, double gamma_x, double t, ExponentReading reading) {
  if (!(j > 0.0)) throw ValidationError("hp: j must be positive");
  const Exponent e = exponent(h0, h, gamma_x, t, reading);
  return std::exp(-2.0 * j * e.rate + e.log_prefactor);
}

double hp_rate(double h0, double h, double gamma_x, double t, ExponentReading reading) {
  return exponent(h0, h, gamma_x, t, reading).rate;
}

}  // namespace lmgdpt
