// Copyright (C) 2026 lmgdpt contributors
// SPDX-License-Identifier: Apache-2.0
//
// Loschmidt echoes, rate functions, kink and peak detection, and the pairing
// of critical times with entropy production maxima.
//
// Echoes are carried as ln L so that values far below the double range (large
// j, extended-precision amplitudes) survive.

#ifndef LMGDPT_DPT_HPP
#define LMGDPT_DPT_HPP

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "lmgdpt/phase_space.hpp"

namespace lmgdpt {

inline constexpr double kEchoFloor = 1e-280;

/// Which echo enters the minimum-rate combination r_m.
///   max_echo: r_m = -(1/N) ln max_a L_a, the smallest individual rate.
///   min_echo: r_m = -(1/N) ln min_a L_a, the largest individual rate.
enum class RateReading { max_echo, min_echo };

std::string to_string(RateReading r);
RateReading parse_rate_reading(const std::string& text);

/// L(t) = |sum_k |<v_k|psi0>|^2 e^{-i E_k t}|^2, O(dim) per time point.
TimeSeries loschmidt_echo(const QuantumState& psi0, const SpectralDecomposition& spec, const RealVector& times);

/// Rate samples with plateau flags. A flagged sample sits below the echo floor
/// and carries no information about the true rate.
struct RateFunction {
  TimeSeries r;
  std::vector<bool> plateau;

  Index flagged() const;
};

/// r = -(1/N) ln L. Samples with L < max(floor, exp(log_floor)) are flagged.
RateFunction rate_function(const TimeSeries& echo, double n, double floor = kEchoFloor);
RateFunction rate_from_log_echo(const RealVector& times, const RealVector& log_echo, double n,
                                double log_floor = std::log(kEchoFloor));

struct EchoBundle {
  RealVector times;
  std::vector<RealVector> log_echoes;  // one per ground state
  double log_floor = std::log(kEchoFloor);

  int g() const noexcept { return static_cast<int>(log_echoes.size()); }
  /// Throws ValidationError on empty or ragged input.
  void validate() const;
};

/// r_s = -(1/N) ln sum_a L_a.
RateFunction net_rate(const EchoBundle& bundle, double n);
RateFunction min_rate(const EchoBundle& bundle, double n, RateReading reading = RateReading::max_echo);

struct KinkOptions {
  /// Curvature threshold; NaN selects `kappa_factor` x median |curvature|.
  double kappa_min = std::numeric_limits<double>::quiet_NaN();
  double kappa_factor = 5.0;
  double t_merge = 0.5;
};

struct KinkDetection {
  std::vector<double> times;
  std::vector<double> sharpness;  // max |discrete curvature| within each merged kink
  double kappa_min_used = 0.0;
  double t_merge_used = 0.0;
};

/// Local maxima of r whose |r_{k-1} - 2 r_k + r_{k+1}| / dt^2 exceeds kappa_min.
/// Plateau samples and their neighbours are excluded. Candidates closer than
/// t_merge collapse onto the highest one.
KinkDetection detect_critical_times(const RateFunction& r, const KinkOptions& options = {});

struct PeakOptions {
  /// Minimum prominence; NaN selects prominence_fraction x (max - min).
  double prominence = std::numeric_limits<double>::quiet_NaN();
  double prominence_fraction = 0.1;
  double t_merge = 0.5;
};

struct PeakDetection {
  std::vector<double> times;
  std::vector<double> prominences;
  double prominence_used = 0.0;
  double t_merge_used = 0.0;
};

/// Strict local maxima (flat tops resolved to their midpoint) whose
/// topographic prominence reaches the threshold.
PeakDetection detect_entropy_peaks(const TimeSeries& pi, const PeakOptions& options = {});

struct LinearFit {
  double slope;
  double intercept;
  double correlation;
};

struct DptReport {
  std::vector<double> critical_times;
  std::vector<double> entropy_peak_times;
  std::vector<std::pair<double, double>> pairs;  // (t_c, t_m)
  double pair_window = 0.0;
  std::optional<LinearFit> fit;  // needs at least two pairs
};

/// Greedy nearest-neighbour pairing within w_pair (NaN: half the median t_c
/// spacing, unbounded with fewer than two t_c), then least squares
/// t_m = a t_c + b and the Pearson correlation of the pairs.
DptReport pair_and_fit(const std::vector<double>& t_c, const std::vector<double>& t_m,
                       double w_pair = std::numeric_limits<double>::quiet_NaN());

}  // namespace lmgdpt

#endif  // LMGDPT_DPT_HPP
