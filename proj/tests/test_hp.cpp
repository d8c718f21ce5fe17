// Copyright (C) 2026 lmgdpt contributors
// SPDX-License-Identifier: Apache-2.0
//

#include <doctest.h>

#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include "lmgdpt/error.hpp"
#include "lmgdpt/hp.hpp"

using namespace lmgdpt;

namespace {

// Echo |<psi|e^{-i w t n}|psi>|^2 of the Gaussian exp(-(x - x0)^2 / (2 sigma^2))
// in the oscillator with unit-width ground state, from its number-basis weights.
double oscillator_echo(double x0, double sigma, double wt) {
  const int n_max = 160;
  const int n_x = 6001;
  const double x_lo = -20.0;
  const double dx = 40.0 / (n_x - 1);
  std::vector<double> weights(n_max, 0.0);
  const double norm = std::pow(M_PI * sigma * sigma, -0.25);
  for (int i = 0; i < n_x; ++i) {
    const double x = x_lo + i * dx;
    const double psi = norm * std::exp(-0.5 * std::pow((x - x0) / sigma, 2));
    // Normalized Hermite functions by recurrence.
    double prev = 0.0;
    double cur = std::pow(M_PI, -0.25) * std::exp(-0.5 * x * x);
    for (int n = 0; n < n_max; ++n) {
      weights[n] += cur * psi * dx;
      const double next = std::sqrt(2.0 / (n + 1)) * x * cur - std::sqrt(static_cast<double>(n) / (n + 1)) * prev;
      prev = cur;
      cur = next;
    }
  }
  std::complex<double> a = 0.0;
  for (int n = 0; n < n_max; ++n) a += weights[n] * weights[n] * std::polar(1.0, -wt * n);
  return std::norm(a);
}

}  // namespace

TEST_CASE("quadratic-boson parameters") {
  CHECK(hp_theta(0.0, 1.0) == doctest::Approx(M_PI / 2));
  CHECK(hp_theta(0.5, 2.0) == doctest::Approx(std::acos(0.25)));
  CHECK(hp_theta(1.6, 1.0) == 0.0);
  CHECK(hp_omega(0.6, 1.0) == doctest::Approx(0.8));
  CHECK(hp_omega(2.0, 1.0) == doctest::Approx(std::sqrt(2.0)));
  CHECK(hp_xi(0.0, 1.0) == 0.0);
  CHECK(hp_xi(0.6, 1.0) == doctest::Approx(-0.25 * std::log(0.64)));
  CHECK(hp_xi(2.0, 1.0) == doctest::Approx(-0.25 * std::log(0.5)));
  CHECK_THROWS_AS(hp_xi(1.0, 1.0), ValidationError);
  CHECK_THROWS_AS(hp_theta(-1.0, 1.0), ValidationError);
  CHECK_THROWS_AS(hp_omega(0.5, 0.0), ValidationError);
  const HpParameters p = hp_parameters(50.0, 0.6, 1.0);
  CHECK(p.alpha_h == doctest::Approx(-std::sqrt(100.0) * std::acos(0.6) / 2));
  CHECK(p.omega_h == doctest::Approx(0.8));
  CHECK_THROWS_AS(hp_ground_state_descriptor(0.0, 0.5, 1.0), ValidationError);
}

TEST_CASE("closed-form echo limits") {
  for (ExponentReading rd : {ExponentReading::as_printed, ExponentReading::squared, ExponentReading::gaussian_overlap}) {
    CHECK(hp_rate(0.0, 0.3, 1.0, 0.0, rd) == 0.0);
    CHECK(hp_loschmidt(100.0, 0.0, 0.3, 1.0, 0.0, rd) == doctest::Approx(1.0));
    for (double t : {0.3, 2.0, 7.7}) CHECK(hp_rate(0.4, 0.4, 1.0, t, rd) == doctest::Approx(0.0).scale(1.0));
    // Revival after a full period of the final oscillator.
    const double period = 2.0 * M_PI / hp_omega(0.3, 1.0);
    CHECK(hp_rate(0.0, 0.3, 1.0, period, rd) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(parse_exponent_reading(to_string(rd)) == rd);
  }
  CHECK_THROWS_AS(parse_exponent_reading("cubed"), ValidationError);
  // The printed form is linear in the angle jump, the squared one quadratic.
  const double dtheta = hp_theta(0.3, 1.0) - hp_theta(0.0, 1.0);
  const double a = hp_rate(0.0, 0.3, 1.0, 1.1, ExponentReading::as_printed);
  const double b = hp_rate(0.0, 0.3, 1.0, 1.1, ExponentReading::squared);
  CHECK(b == doctest::Approx(a * dtheta));
  CHECK_THROWS_AS(hp_loschmidt(10.0, 0.0, 1.0, 1.0, 0.5), ValidationError);
}

TEST_CASE("large-j rate drops the squeezing prefactor") {
  const double t = 1.3;
  const double rate = hp_rate(0.0, 0.5, 1.0, t);
  for (double j : {10.0, 1000.0}) {
    const double from_echo = -std::log(hp_loschmidt(j, 0.0, 0.5, 1.0, t)) / (2.0 * j);
    CHECK(std::abs(from_echo - rate) < 1.0 / j);
  }
}

TEST_CASE("gaussian_overlap reading equals the echo of a displaced squeezed oscillator state") {
  // The initial vacuum, displaced by sqrt(j) |dtheta| e^{-xi0} in its own units, is a unit
  // Gaussian; in final-mode units every length scales by e^{-dxi}.
  const double j = 20.0;
  for (const auto& [h0, h] : std::vector<std::pair<double, double>>{{0.0, 0.2}, {0.0, 0.5}, {0.0, 0.8}, {0.3, 0.7}}) {
    const double dtheta = hp_theta(h, 1.0) - hp_theta(h0, 1.0);
    const double xi0 = hp_xi(h0, 1.0);
    const double dxi = hp_xi(h, 1.0) - xi0;
    const double scale = std::exp(-dxi);
    const double x0 = std::sqrt(j) * std::abs(dtheta) * std::exp(-xi0) * scale;
    const double w = hp_omega(h, 1.0);
    for (double t : {0.4, 1.9, 3.3, 6.0}) {
      const double formula = hp_loschmidt(j, h0, h, 1.0, t);
      CHECK(formula == doctest::Approx(oscillator_echo(x0, scale, w * t)).epsilon(1e-7));
    }
  }
}

TEST_CASE("reference values") {
  CHECK(hp_xi(0.8, 1.0) == doctest::Approx(0.2554128).epsilon(1e-7));
  CHECK(hp_xi(2.0, 1.0) == doctest::Approx(0.1732868).epsilon(1e-7));
  CHECK(hp_ground_state_descriptor(200.0, 0.0, 1.0).alpha_h == doctest::Approx(-5.0 * M_PI));
  CHECK(hp_ground_state_descriptor(50.0, 1.6, 1.0).alpha_h == 0.0);
  CHECK(hp_ground_state_descriptor(10.0, 0.6, 1.0).xi_h == hp_ground_state_descriptor(1000.0, 0.6, 1.0).xi_h);
  // The printed reading peaks at half period with the bare angle jump.
  const double w = hp_omega(0.3, 1.0);
  const double dtheta = hp_theta(0.3, 1.0) - hp_theta(0.1, 1.0);
  CHECK(hp_rate(0.1, 0.3, 1.0, M_PI / w, ExponentReading::as_printed) ==
        doctest::Approx(dtheta * std::exp(-2.0 * hp_xi(0.1, 1.0))));
}

TEST_CASE("branches meet at the critical field asymmetrically") {
  CHECK(hp_omega(0.9, 1.0) != doctest::Approx(hp_omega(1.1, 1.0)));
  for (double eps : {1e-2, 1e-4, 1e-6}) {
    CHECK(hp_omega(1.0 - eps, 1.0) < 2.0 * std::sqrt(eps));
    CHECK(hp_omega(1.0 + eps, 1.0) < 2.0 * std::sqrt(eps));
  }
  CHECK(hp_xi(1.0 - 1e-6, 1.0) > 3.0);
  CHECK(hp_xi(1.0 + 1e-6, 1.0) > 3.0);
  CHECK(hp_xi(1.0 - 1e-6, 1.0) > hp_xi(1.0 - 1e-3, 1.0));
}

TEST_CASE("curves are periodic in the final oscillator period") {
  for (ExponentReading rd : {ExponentReading::as_printed, ExponentReading::squared, ExponentReading::gaussian_overlap}) {
    for (const auto& [h0, h] : std::vector<std::pair<double, double>>{{0.0, 0.1}, {0.0, 0.8}, {0.3, 1.6}}) {
      const double period = 2.0 * M_PI / hp_omega(h, 1.0);
      for (double t : {0.37, 1.2, 2.9}) {
        CHECK(std::abs(hp_rate(h0, h, 1.0, t + period, rd) - hp_rate(h0, h, 1.0, t, rd)) < 1e-12);
        // The echo is exp(-2j rate), so its relative error is 2j times that of the rate.
        const double a = hp_loschmidt(50.0, h0, h, 1.0, t + period, rd), b = hp_loschmidt(50.0, h0, h, 1.0, t, rd);
        CHECK(std::abs(std::log(a / b)) < 100.0 * 1e-12);
      }
    }
  }
}

TEST_CASE("sign of the rate for upward quenches from zero field") {
  // theta_h < theta_{h0}: quadratic readings stay non-negative, the printed one
  // turns negative and lets L exceed 1.
  for (double t : {0.5, 2.0, 4.0}) {
    CHECK(hp_rate(0.0, 0.5, 1.0, t, ExponentReading::squared) >= 0.0);
    CHECK(hp_rate(0.0, 0.5, 1.0, t, ExponentReading::gaussian_overlap) >= 0.0);
    CHECK(hp_rate(0.0, 0.5, 1.0, t, ExponentReading::as_printed) < 0.0);
    CHECK(hp_loschmidt(50.0, 0.0, 0.5, 1.0, t, ExponentReading::as_printed) > 1.0);
  }
}

TEST_CASE("squared reading keeps the echo a probability") {
  for (const auto& [h0, h] : std::vector<std::pair<double, double>>{{0.0, 0.1}, {0.0, 0.8}, {0.5, 0.2}, {0.0, 1.6}, {2.0, 1.3}}) {
    for (int k = 0; k <= 200; ++k) {
      const double l = hp_loschmidt(30.0, h0, h, 1.0, 0.05 * k, ExponentReading::squared);
      CHECK(l > 0.0);
      CHECK(l <= 1.0 + 1e-15);
    }
  }
}
