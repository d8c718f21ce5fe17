// Copyright (C) 2026 lmgdpt contributors
// SPDX-License-Identifier: Apache-2.0
//
// Quench orchestration and result persistence.

#ifndef LMGDPT_RUNNER_HPP
#define LMGDPT_RUNNER_HPP

#include <optional>
#include <string>
#include <vector>

#include "lmgdpt/config.hpp"

namespace lmgdpt {

inline constexpr const char* kVersion = "0.3.0";

/// Exact rate against one closed-form reading, over the first two periods of
/// the final oscillator (clipped to t_max).
struct HpReadingComparison {
  ExponentReading reading;
  double relative_mismatch;  // sup |r - r_hp| / max r
  double min_rate;           // negative values mean L_hp > 1
};

struct QuenchResult {
  double j = 0.0;
  double h0 = 0.0;
  double h = 0.0;
  double gamma_x = 1.0;
  int g = 1;
  std::string initial_state;   // resolved choice
  std::string precision_used;  // "double" or "extended"
  int precision_bits = 53;
  double log_floor = 0.0;
  double degeneracy_threshold = 0.0;
  std::pair<Index, Index> grid{0, 0};

  RealVector times;
  RealVector log_echo;                    // configured initial state
  std::vector<RealVector> log_echo_ground;  // one per ground state
  std::optional<RealVector> log_echo_superposition;

  RateFunction r;
  RateFunction r_s;
  RateFunction r_m;

  std::optional<TimeSeries> wehrl;
  std::optional<TimeSeries> production;
  std::optional<RealVector> production_richardson;  // NaN at the end points
  double richardson_max_correction = 0.0;
  std::optional<RealVector> polar;  // NaN where not evaluated

  std::optional<RealVector> hp_echo;
  std::optional<RealVector> hp_rate;
  std::vector<HpReadingComparison> hp_comparison;
  double hp_window = 0.0;

  KinkDetection kinks;
  PeakDetection peaks;
  DptReport report;
};

/// Runs one (j, h) quench from config.h0 entirely in memory.
QuenchResult compute_quench(const ExperimentConfig& config, double j, double h);

/// Output file stem shared by all files of one run, e.g. "quench_j600_h00_h0.8".
std::string run_stem(double j, double h0, double h);

/// Compact JSON echo of every config key with its effective value.
std::string config_to_json(const ExperimentConfig& config);

struct RunEntry {
  double j = 0.0;
  double h = 0.0;
  bool ok = false;
  int error_code = 0;  // 1 validation, 2 numerical
  std::string error;
  std::string csv_path;
  std::string detection_path;
  std::vector<std::string> extra_paths;
  double seconds = 0.0;
  std::string detail_json;  // per-run metadata and thresholds
};

struct RunManifest {
  std::string manifest_path;
  std::vector<RunEntry> runs;

  bool all_ok() const;
};

/// CSV with columns t, L, log_L, L_gs1[, L_gs2, L_sup], r, r_s, r_m, plateau
/// [, S_Q, Pi_Q][, Pi_polar][, L_hp, r_hp]; 17 significant digits.
void write_timeseries_csv(const QuenchResult& result, const std::string& path);
void write_detection_json(const QuenchResult& result, const ExperimentConfig& config, const std::string& path);

/// compute_quench followed by the CSV and detection files. Never throws for
/// failures inside the run; they are recorded in the entry.
RunEntry run_quench(const ExperimentConfig& config, double j, double h);

/// Cartesian product j_list x h_list (duplicates dropped with a warning),
/// independent runs in parallel, then manifest.json in output_dir.
RunManifest run_sweep(const ExperimentConfig& config);

/// Analytic curves on the config time grid for each (j, h); one CSV per pair
/// with columns t, L_hp, r_hp.
RunManifest run_hp(const ExperimentConfig& config);

/// Re-runs kink and peak detection on an existing time-series CSV with the
/// thresholds in `config`, writing a detection JSON to `out_path`.
void analyze_csv(const std::string& csv_path, const ExperimentConfig& config, const std::string& out_path);

}  // namespace lmgdpt

#endif  // LMGDPT_RUNNER_HPP
