// Copyright (C) 2026 lmgdpt contributors
// SPDX-License-Identifier: Apache-2.0
//

#include <doctest.h>

#include <string>

#include "lmgdpt/config.hpp"
#include "lmgdpt/error.hpp"

using namespace lmgdpt;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ValidationError& e) {
    return e.what();
  }
  return {};
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("minimal config takes the documented defaults") {
  const ExperimentConfig c = parse_config("j = 50\nh0 = 0\nh = 0.8\n");
  CHECK(c.j_list == std::vector<double>{50.0});
  CHECK(c.h_list == std::vector<double>{0.8});
  CHECK(c.h0 == 0.0);
  CHECK(c.gamma_x == 1.0);
  CHECK(c.t_max == 20.0);
  CHECK(c.n_t == 2001);
  CHECK_FALSE(c.grid_override.has_value());
  CHECK(c.initial_state.kind == InitialStateChoice::Kind::automatic);
  CHECK(c.compute_husimi);
  CHECK_FALSE(c.richardson_check);
  CHECK(c.precision == PrecisionMode::automatic);
  CHECK(c.exponent_reading == ExponentReading::gaussian_overlap);
  CHECK(c.rate_reading == RateReading::max_echo);
  CHECK(c.output_dir == "out");
}

TEST_CASE("full syntax") {
  const ExperimentConfig c = parse_config(R"(# sweep over three sizes
j = [75, 150, 300]   # comma lists in brackets
h0 = 0
h = [0.1, 0.8]
gamma_x = 1.0
t_max = 10
n_t = 1001
grid = [64, 128]
initial_state = ground:1
compute_husimi = true
richardson_check = true
precision = extended
precision_bits = 640
exponent_reading = squared
rate_reading = min_echo
kappa_min = 2.5
t_merge = 0.25
output_dir = "runs/a b#c"
threads = 2
)");
  CHECK(c.j_list == std::vector<double>{75.0, 150.0, 300.0});
  CHECK(c.h_list == std::vector<double>{0.1, 0.8});
  CHECK(c.n_t == 1001);
  REQUIRE(c.grid_override.has_value());
  CHECK(c.grid_override->first == 64);
  CHECK(c.grid_override->second == 128);
  CHECK(c.initial_state.index == 1);
  CHECK(c.richardson_check);
  CHECK(c.precision == PrecisionMode::extended);
  CHECK(c.precision_bits == 640);
  CHECK(c.exponent_reading == ExponentReading::squared);
  CHECK(c.rate_reading == RateReading::min_echo);
  CHECK(c.kinks.kappa_min == doctest::Approx(2.5));
  CHECK(c.kinks.t_merge == doctest::Approx(0.25));
  CHECK(c.output_dir == "runs/a b#c");
  CHECK(c.threads == 2);
  CHECK(parse_config("j = 4\nh0 = 0\nh = 1\ngrid = auto\n").grid_override == std::nullopt);
}

TEST_CASE("errors name the offending key and line") {
  const std::string neg = error_of("j = 10\nh0 = 0\nh = -0.5\n");
  CHECK(contains(neg, "line 3"));
  CHECK(contains(neg, "'h'"));
  CHECK(contains(error_of("j = 0.3\nh0 = 0\nh = 0.5\n"), "'j'"));
  CHECK(contains(error_of("j = 4\nh0 = 0\nh = 0.5\nspeed = 3\n"), "unknown key 'speed'"));
  CHECK(contains(error_of("j = 4\nh0 = 0\nh = 0.5\nj = 5\n"), "line 4: duplicate key 'j'"));
  CHECK(contains(error_of("j = 4\nh = 0.5\n"), "missing required key 'h0'"));
  CHECK(contains(error_of("j = 4\nh0 = 0\nh = 0.5\nn_t = 10.5\n"), "'n_t'"));
  CHECK(contains(error_of("j = 4\nh0 = 0\nh = 0.5\ngrid = [3]\n"), "'grid'"));
  CHECK(contains(error_of("j = 4\nh0 = 0\nh = [0.5, [1]]\n"), "nested"));
  CHECK(contains(error_of("j = 4\nh0 = 0\nh = [0.5\n"), "unterminated"));
  CHECK(contains(error_of("j = 4\nh0 = 0\nh = 0.5\noutput_dir = \"x\n"), "unterminated string"));
  CHECK(contains(error_of("j = 4\nh0 = 0\nh = 0.5\ncompute_husimi = yes\n"), "true or false"));
  CHECK(contains(error_of("j = 4\nh0 = 0\nh = 0.5\njust words\n"), "line 4: expected 'key = value'"));
  CHECK(contains(error_of("j = 4\nh0 = 0\nh = 0.5\nprecision = quad\n"), "'precision'"));
  CHECK(contains(error_of("j = 4\nh0 = 0\nh = 0.5\ninitial_state = ground:2\n"), "'initial_state'"));
  CHECK(contains(error_of("j = 4\nh0 = 0\nh = 0.5\ncompute_husimi = false\nrichardson_check = true\n"),
                 "'richardson_check'"));
  CHECK(contains(error_of("j = 4\nh0 = 0\nh = 1\nhp_compare = true\n"), "critical field"));
  CHECK(contains(error_of("j = 4\nh0 = 0\nh = []\n"), "'h'"));
}

TEST_CASE("settings apply one key at a time") {
  ExperimentConfig c;
  apply_setting(c, "j", "[4, 8]");
  apply_setting(c, "h", "0.5");
  apply_setting(c, "prominence_fraction", "0.2");
  CHECK(c.j_list.size() == 2);
  CHECK(c.peaks.prominence_fraction == doctest::Approx(0.2));
  CHECK_NOTHROW(validate_config(c));
  CHECK_THROWS_AS(apply_setting(c, "prominence_fraction", "1.5"), ValidationError);
  CHECK_THROWS_AS(apply_setting(c, "threads", "-1"), ValidationError);
  CHECK_THROWS_AS(apply_setting(c, "nope", "1"), ValidationError);
  for (const auto& key : config_keys()) CHECK_FALSE(key.empty());
  CHECK(parse_precision_mode(to_string(PrecisionMode::double_only)) == PrecisionMode::double_only);
}

TEST_CASE("missing file") {
  CHECK_THROWS_AS(load_config("/nonexistent/lmgdpt.cfg"), ValidationError);
}
