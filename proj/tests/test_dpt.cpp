// Copyright (C) 2026 lmgdpt contributors
// SPDX-License-Identifier: Apache-2.0
//

#include <doctest.h>

#include <cmath>

#include "lmgdpt/dpt.hpp"
#include "lmgdpt/error.hpp"

using namespace lmgdpt;

namespace {

RateFunction rate_of(const RealVector& t, const RealVector& r) {
  return {TimeSeries::make(t, r), std::vector<bool>(static_cast<std::size_t>(t.size()), false)};
}

}  // namespace

TEST_CASE("echo of a quench") {
  const auto j = SpinQuantumNumber::from_value(8.0);
  const LmgParameters p0 = LmgParameters::make(j, 0.0);
  const LmgParameters p1 = LmgParameters::make(j, 0.8);
  const QuenchProtocol protocol{0.0, 0.8, 1.0, 2, InitialStateChoice::superposition()};
  const QuantumState psi0 = quenched_states(protocol, p0, p1)[0];
  const SpectralDecomposition s1 = hermitian_eigendecomposition(build_hamiltonian(p1));
  const RealVector t = uniform_times(20.0, 401);
  const TimeSeries echo = loschmidt_echo(psi0, s1, t);
  CHECK(echo.values[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(echo.values.maxCoeff() <= 1.0 + 1e-12);
  CHECK(echo.values.minCoeff() >= 0.0);
  // Oracle: direct overlaps of evolved states.
  for (Index k : {7, 123, 400}) {
    CHECK(echo.values[k] == doctest::Approx(std::norm(psi0.overlap(evolve(psi0, s1, t[k])))).epsilon(1e-10));
  }
  // Identity quench.
  const QuantumState eig(s1.eigenvectors.col(0));
  const TimeSeries still = loschmidt_echo(eig, s1, t);
  CHECK((still.values.array() - 1.0).abs().maxCoeff() < 1e-10);
}

TEST_CASE("rate function and plateau flags") {
  const RealVector t = RealVector::LinSpaced(5, 0.0, 4.0);
  RealVector l(5);
  l << 1.0, 0.5, 1e-300, 0.0, 0.25;
  const RateFunction r = rate_function(TimeSeries::make(t, l), 10.0);
  CHECK(r.r.values[0] == 0.0);
  CHECK(r.r.values[1] == doctest::Approx(std::log(2.0) / 10.0));
  CHECK(r.plateau == std::vector<bool>{false, false, true, true, false});
  CHECK(r.flagged() == 2);
  CHECK(std::isfinite(r.r.values[3]));
  const RateFunction lr = rate_from_log_echo(t, l.array().max(1e-320).log().matrix(), 10.0);
  CHECK(lr.r.values[4] == doctest::Approx(std::log(4.0) / 10.0));
  CHECK(lr.flagged() == 2);
}

TEST_CASE("degenerate-rate sandwich") {
  const RealVector t = RealVector::LinSpaced(200, 0.0, 10.0);
  const RealVector a = (-t.array().square() * 0.3).matrix();
  const RealVector b = (-(t.array() - 2.0).abs() * 2.0 - 1.0).matrix();
  const EchoBundle bundle{t, {a, b}};
  const double n = 40.0;
  const RateFunction rs = net_rate(bundle, n);
  const RateFunction rmax = min_rate(bundle, n, RateReading::max_echo);
  const RateFunction rmin = min_rate(bundle, n, RateReading::min_echo);
  for (Index k = 0; k < t.size(); ++k) {
    CHECK(rs.r.values[k] <= rmax.r.values[k] + 1e-15);
    CHECK(rmax.r.values[k] - rs.r.values[k] <= std::log(2.0) / n + 1e-15);
    CHECK(rmin.r.values[k] >= rmax.r.values[k]);
    CHECK(rmax.r.values[k] == doctest::Approx(-std::max(a[k], b[k]) / n));
  }
  // Identical echoes: r_s = r - ln 2 / N exactly.
  const RateFunction same = net_rate(EchoBundle{t, {a, a}}, n);
  for (Index k = 0; k < t.size(); ++k) CHECK(same.r.values[k] == doctest::Approx(-a[k] / n - std::log(2.0) / n));
  CHECK_THROWS_AS(net_rate(EchoBundle{t, {}}, n), ValidationError);
  CHECK_THROWS_AS(net_rate(EchoBundle{t, {a, a.head(10)}}, n), ValidationError);
  CHECK(parse_rate_reading(to_string(RateReading::min_echo)) == RateReading::min_echo);
  CHECK_THROWS_AS(parse_rate_reading("average"), ValidationError);
}

TEST_CASE("kink detection on cusps") {
  const RealVector t = RealVector::LinSpaced(2001, 0.0, 20.0);
  // Smoothed cusps |sin| peaking at 2.5 + 5 n, on top of a gentle background.
  RealVector r(t.size());
  for (Index k = 0; k < t.size(); ++k) {
    const double s = std::sin(M_PI * (t[k] + 2.5) / 5.0);
    r[k] = 0.3 * (1.0 - std::sqrt(s * s + 1e-6)) + 0.01 * std::sin(0.3 * t[k]);
  }
  const KinkDetection kd = detect_critical_times(rate_of(t, r));
  REQUIRE(kd.times.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) CHECK(kd.times[i] == doctest::Approx(2.5 + 5.0 * i).epsilon(0.005));
  CHECK(kd.t_merge_used == 0.5);
  CHECK(kd.sharpness.size() == 4);
  for (double s : kd.sharpness) CHECK(s > kd.kappa_min_used);
}

TEST_CASE("smooth signals have no kinks") {
  const RealVector t = RealVector::LinSpaced(2001, 0.0, 20.0);
  const RealVector r = (0.2 * (1.0 - (t.array() * 1.3).cos())).matrix();
  CHECK(detect_critical_times(rate_of(t, r)).times.empty());
  KinkOptions o;
  o.kappa_min = 10.0;
  CHECK(detect_critical_times(rate_of(t, r), o).times.empty());
  CHECK(detect_critical_times(rate_of(t, RealVector::Zero(t.size()))).times.empty());
}

TEST_CASE("kinks inside plateaus are ignored and close kinks merge") {
  const RealVector t = RealVector::LinSpaced(1001, 0.0, 10.0);
  RealVector r(t.size());
  for (Index k = 0; k < t.size(); ++k) r[k] = 1.0 - std::abs(t[k] - 3.0) - 0.9 * std::exp(-1e4 * std::pow(t[k] - 3.2, 2));
  RateFunction rf = rate_of(t, r);
  KinkOptions o;
  o.kappa_min = 1.0;
  o.t_merge = 0.5;
  const KinkDetection merged = detect_critical_times(rf, o);
  REQUIRE(merged.times.size() >= 1);
  CHECK(merged.times[0] == doctest::Approx(3.0));
  for (Index k = 280; k <= 320; ++k) rf.plateau[static_cast<std::size_t>(k)] = true;
  const KinkDetection masked = detect_critical_times(rf, o);
  for (double tc : masked.times) CHECK(std::abs(tc - 3.0) > 0.2);
}

TEST_CASE("entropy peak detection") {
  const RealVector t = RealVector::LinSpaced(2001, 0.0, 20.0);
  RealVector pi(t.size());
  for (Index k = 0; k < t.size(); ++k) pi[k] = std::sin(2.0 * M_PI * t[k] / 4.0) + 0.02 * std::sin(2.0 * M_PI * t[k] / 0.3);
  const PeakDetection pd = detect_entropy_peaks(TimeSeries::make(t, pi));
  REQUIRE(pd.times.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) CHECK(pd.times[i] == doctest::Approx(1.0 + 4.0 * i).epsilon(0.05));
  CHECK(pd.prominence_used == doctest::Approx(0.1 * (pi.maxCoeff() - pi.minCoeff())));

  // Flat top resolves to its midpoint.
  RealVector flat = RealVector::Zero(11);
  flat.segment(4, 3).setConstant(1.0);
  const PeakDetection fp = detect_entropy_peaks(TimeSeries::make(RealVector::LinSpaced(11, 0.0, 10.0), flat));
  REQUIRE(fp.times.size() == 1);
  CHECK(fp.times[0] == doctest::Approx(5.0));
  CHECK(fp.prominences[0] == doctest::Approx(1.0));

  PeakOptions strict;
  strict.prominence = 5.0;
  CHECK(detect_entropy_peaks(TimeSeries::make(t, pi), strict).times.empty());
}

TEST_CASE("pairing and fit") {
  const std::vector<double> tc = {2.3, 6.9, 11.2, 15.6};
  const std::vector<double> tm = {2.6, 7.2, 11.5, 15.9, 30.0};
  const DptReport rep = pair_and_fit(tc, tm);
  CHECK(rep.pairs.size() == 4);
  REQUIRE(rep.fit.has_value());
  CHECK(rep.fit->slope == doctest::Approx(1.0));
  CHECK(rep.fit->intercept == doctest::Approx(0.3));
  CHECK(rep.fit->correlation == doctest::Approx(1.0));
  CHECK(rep.pair_window == doctest::Approx(0.5 * 4.4));

  const DptReport narrow = pair_and_fit(tc, tm, 0.1);
  CHECK(narrow.pairs.empty());
  CHECK_FALSE(narrow.fit.has_value());

  const DptReport single = pair_and_fit({3.0}, {3.4});
  CHECK(single.pairs.size() == 1);
  CHECK(std::isinf(single.pair_window));
  CHECK_FALSE(single.fit.has_value());
  CHECK(pair_and_fit({}, {}).pairs.empty());
}
