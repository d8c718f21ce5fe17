// Copyright (C) 2026 lmgdpt contributors
// SPDX-License-Identifier: Apache-2.0
//
// Experiment configuration: a flat `key = value` text format with arrays.
// The grammar is documented in docs/config-format.md.

#ifndef LMGDPT_CONFIG_HPP
#define LMGDPT_CONFIG_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lmgdpt/dpt.hpp"
#include "lmgdpt/hp.hpp"
#include "lmgdpt/lmg.hpp"

namespace lmgdpt {

enum class PrecisionMode { automatic, double_only, extended };

std::string to_string(PrecisionMode m);
PrecisionMode parse_precision_mode(const std::string& text);

struct ExperimentConfig {
  std::vector<double> j_list;
  double h0 = 0.0;
  std::vector<double> h_list;
  double gamma_x = 1.0;
  double t_max = 20.0;
  Index n_t = 2001;
  std::optional<std::pair<Index, Index>> grid_override;
  InitialStateChoice initial_state = InitialStateChoice::automatic();

  bool compute_husimi = true;
  bool richardson_check = false;  // extra S_Q evaluations at half steps
  bool compute_polar_rate = false;
  Index polar_every = 20;
  bool hp_compare = false;
  ExponentReading exponent_reading = ExponentReading::gaussian_overlap;
  RateReading rate_reading = RateReading::max_echo;

  PrecisionMode precision = PrecisionMode::automatic;
  int precision_bits = 0;  // 0: library default
  std::optional<double> degeneracy_threshold;

  KinkOptions kinks;
  PeakOptions peaks;
  std::optional<double> pair_window;

  Index husimi_dump_every = 0;  // 0 disables snapshots
  std::string output_dir = "out";
  int threads = 0;  // 0: hardware concurrency
};

/// Parses and validates a whole document. Unknown keys, duplicates and type
/// errors are reported with their line number. j, h0 and h are required.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Applies one `key = value` assignment (value in config syntax). Used for
/// command-line overrides. Does not run whole-config validation.
void apply_setting(ExperimentConfig& config, const std::string& key, const std::string& value);

/// Cross-field checks; throws ValidationError naming the offending key.
void validate_config(const ExperimentConfig& config);

/// Every key accepted by apply_setting.
const std::vector<std::string>& config_keys();

}  // namespace lmgdpt

#endif  // LMGDPT_CONFIG_HPP
