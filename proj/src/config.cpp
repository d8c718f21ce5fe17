// Copyright (C) 2026 lmgdpt contributors
// SPDX-License-Identifier: Apache-2.0
//

#include "lmgdpt/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "lmgdpt/error.hpp"

namespace lmgdpt {

namespace {

struct Value {
  enum class Kind { number, boolean, string, array };
  Kind kind = Kind::string;
  double number = 0.0;
  bool boolean = false;
  std::string text;
  std::vector<Value> items;
};

class ValueParser {
 public:
  explicit ValueParser(const std::string& s) : s_(s) {}

  Value parse_document() {
    Value v = parse_value();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected trailing characters '" + s_.substr(pos_) + "'");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ValidationError(what); }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  Value parse_value() {
    skip_ws();
    if (pos_ >= s_.size()) fail("missing value");
    const char c = s_[pos_];
    if (c == '[') return parse_array();
    if (c == '"') return parse_string();
    return parse_bare();
  }

  Value parse_array() {
    Value v;
    v.kind = Value::Kind::array;
    ++pos_;
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == ']') {
      ++pos_;
      return v;
    }
    while (true) {
      Value item = parse_value();
      if (item.kind == Value::Kind::array) fail("nested arrays are not allowed");
      v.items.push_back(std::move(item));
      skip_ws();
      if (pos_ >= s_.size()) fail("unterminated array");
      if (s_[pos_] == ',') {
        ++pos_;
        continue;
      }
      if (s_[pos_] == ']') {
        ++pos_;
        return v;
      }
      fail(std::string("expected ',' or ']' in array, found '") + s_[pos_] + "'");
    }
  }

  Value parse_string() {
    Value v;
    ++pos_;
    while (pos_ < s_.size() && s_[pos_] != '"') {
      if (s_[pos_] == '\\' && pos_ + 1 < s_.size()) ++pos_;
      v.text.push_back(s_[pos_++]);
    }
    if (pos_ >= s_.size()) fail("unterminated string");
    ++pos_;
    return v;
  }

  Value parse_bare() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && s_[pos_] != ',' && s_[pos_] != ']' &&
           !std::isspace(static_cast<unsigned char>(s_[pos_]))) {
      ++pos_;
    }
    const std::string token = s_.substr(start, pos_ - start);
    if (token.empty()) fail("empty value");
    Value v;
    if (token == "true" || token == "false") {
      v.kind = Value::Kind::boolean;
      v.boolean = token == "true";
      return v;
    }
    char* end = nullptr;
    const double d = std::strtod(token.c_str(), &end);
    if (end != nullptr && *end == '\0') {
      v.kind = Value::Kind::number;
      v.number = d;
      return v;
    }
    for (char ch : token) {
      if (!(std::isalnum(static_cast<unsigned char>(ch)) || std::string("_:.-/+").find(ch) != std::string::npos)) {
        fail("invalid bare word '" + token + "' (quote strings containing special characters)");
      }
    }
    v.text = token;
    return v;
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

[[noreturn]] void key_error(const std::string& key, const std::string& what) {
  throw ValidationError("key '" + key + "': " + what);
}

double as_number(const std::string& key, const Value& v) {
  if (v.kind != Value::Kind::number) key_error(key, "expected a number");
  if (!std::isfinite(v.number)) key_error(key, "value must be finite");
  return v.number;
}

long as_integer(const std::string& key, const Value& v) {
  const double d = as_number(key, v);
  if (d != std::floor(d) || std::abs(d) > 1e12) key_error(key, "expected an integer");
  return static_cast<long>(d);
}

bool as_bool(const std::string& key, const Value& v) {
  if (v.kind != Value::Kind::boolean) key_error(key, "expected true or false");
  return v.boolean;
}

std::string as_string(const std::string& key, const Value& v) {
  if (v.kind != Value::Kind::string) key_error(key, "expected a string");
  return v.text;
}

std::vector<double> as_number_list(const std::string& key, const Value& v) {
  if (v.kind == Value::Kind::number) return {as_number(key, v)};
  if (v.kind != Value::Kind::array) key_error(key, "expected a number or an array of numbers");
  std::vector<double> out;
  for (const auto& item : v.items) out.push_back(as_number(key, item));
  return out;
}

double non_negative(const std::string& key, double d) {
  if (d < 0.0) key_error(key, "must be non-negative, got " + std::to_string(d));
  return d;
}

double positive(const std::string& key, double d) {
  if (!(d > 0.0)) key_error(key, "must be positive, got " + std::to_string(d));
  return d;
}

template <class F>
auto rethrow_for(const std::string& key, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ValidationError& e) {
    const std::string what = e.what();
    if (what.rfind("key '", 0) == 0) throw;
    key_error(key, what);
  }
}

}  // namespace

std::string to_string(PrecisionMode m) {
  switch (m) {
    case PrecisionMode::double_only:
      return "double";
    case PrecisionMode::extended:
      return "extended";
    case PrecisionMode::automatic:
      break;
  }
  return "auto";
}

PrecisionMode parse_precision_mode(const std::string& text) {
  if (text == "auto") return PrecisionMode::automatic;
  if (text == "double") return PrecisionMode::double_only;
  if (text == "extended") return PrecisionMode::extended;
  throw ValidationError("precision: expected auto, double or extended, got '" + text + "'");
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "j",           "h0",           "h",
      "gamma_x",     "t_max",        "n_t",
      "grid",        "initial_state", "compute_husimi",
      "richardson_check", "compute_polar_rate", "polar_every", "hp_compare",
      "exponent_reading",   "rate_reading", "precision",
      "precision_bits",     "degeneracy_threshold", "kappa_min",
      "kappa_factor",       "t_merge",      "prominence",
      "prominence_fraction", "pair_window", "husimi_dump_every",
      "output_dir",         "threads"};
  return keys;
}

void apply_setting(ExperimentConfig& c, const std::string& key, const std::string& text) {
  const Value v = rethrow_for(key, [&] { return ValueParser(text).parse_document(); });
  if (key == "j") {
    c.j_list.clear();
    for (double j : as_number_list(key, v)) {
      rethrow_for(key, [&] { return SpinQuantumNumber::from_value(j); });
      c.j_list.push_back(j);
    }
  } else if (key == "h0") {
    c.h0 = non_negative(key, as_number(key, v));
  } else if (key == "h") {
    c.h_list.clear();
    for (double h : as_number_list(key, v)) c.h_list.push_back(non_negative(key, h));
  } else if (key == "gamma_x") {
    c.gamma_x = positive(key, as_number(key, v));
  } else if (key == "t_max") {
    c.t_max = positive(key, as_number(key, v));
  } else if (key == "n_t") {
    const long n = as_integer(key, v);
    if (n < 2) key_error(key, "must be at least 2");
    c.n_t = n;
  } else if (key == "grid") {
    if (v.kind == Value::Kind::string && v.text == "auto") {
      c.grid_override.reset();
    } else {
      if (v.kind != Value::Kind::array || v.items.size() != 2) key_error(key, "expected auto or [n_theta, n_phi]");
      const long nt = as_integer(key, v.items[0]);
      const long np = as_integer(key, v.items[1]);
      if (nt < 2 || np < 2) key_error(key, "both sizes must be at least 2");
      c.grid_override = std::make_pair(static_cast<Index>(nt), static_cast<Index>(np));
    }
  } else if (key == "initial_state") {
    c.initial_state = rethrow_for(key, [&] { return InitialStateChoice::parse(as_string(key, v)); });
  } else if (key == "compute_husimi") {
    c.compute_husimi = as_bool(key, v);
  } else if (key == "richardson_check") {
    c.richardson_check = as_bool(key, v);
  } else if (key == "compute_polar_rate") {
    c.compute_polar_rate = as_bool(key, v);
  } else if (key == "polar_every") {
    const long n = as_integer(key, v);
    if (n < 1) key_error(key, "must be at least 1");
    c.polar_every = n;
  } else if (key == "hp_compare") {
    c.hp_compare = as_bool(key, v);
  } else if (key == "exponent_reading") {
    c.exponent_reading = rethrow_for(key, [&] { return parse_exponent_reading(as_string(key, v)); });
  } else if (key == "rate_reading") {
    c.rate_reading = rethrow_for(key, [&] { return parse_rate_reading(as_string(key, v)); });
  } else if (key == "precision") {
    c.precision = rethrow_for(key, [&] { return parse_precision_mode(as_string(key, v)); });
  } else if (key == "precision_bits") {
    const long b = as_integer(key, v);
    if (b != 0 && (b < 64 || b > 65536)) key_error(key, "must be 0 (default) or lie in [64, 65536]");
    c.precision_bits = static_cast<int>(b);
  } else if (key == "degeneracy_threshold") {
    c.degeneracy_threshold = positive(key, as_number(key, v));
  } else if (key == "kappa_min") {
    c.kinks.kappa_min = non_negative(key, as_number(key, v));
  } else if (key == "kappa_factor") {
    c.kinks.kappa_factor = positive(key, as_number(key, v));
  } else if (key == "t_merge") {
    const double t = non_negative(key, as_number(key, v));
    c.kinks.t_merge = t;
    c.peaks.t_merge = t;
  } else if (key == "prominence") {
    c.peaks.prominence = non_negative(key, as_number(key, v));
  } else if (key == "prominence_fraction") {
    const double f = non_negative(key, as_number(key, v));
    if (f > 1.0) key_error(key, "must not exceed 1");
    c.peaks.prominence_fraction = f;
  } else if (key == "pair_window") {
    c.pair_window = positive(key, as_number(key, v));
  } else if (key == "husimi_dump_every") {
    const long n = as_integer(key, v);
    if (n < 0) key_error(key, "must be non-negative");
    c.husimi_dump_every = n;
  } else if (key == "output_dir") {
    const std::string dir = as_string(key, v);
    if (dir.empty()) key_error(key, "must not be empty");
    c.output_dir = dir;
  } else if (key == "threads") {
    const long n = as_integer(key, v);
    if (n < 0 || n > 1024) key_error(key, "must lie in [0, 1024]");
    c.threads = static_cast<int>(n);
  } else {
    throw ValidationError("unknown key '" + key + "'");
  }
}

void validate_config(const ExperimentConfig& c) {
  if (c.j_list.empty()) key_error("j", "at least one value is required");
  if (c.h_list.empty()) key_error("h", "at least one value is required");
  if (c.compute_husimi && c.n_t < 3) key_error("n_t", "entropy production needs at least 3 samples");
  if (c.richardson_check && !c.compute_husimi) key_error("richardson_check", "requires compute_husimi = true");
  if (c.hp_compare) {
    if (c.h0 == c.gamma_x) key_error("h0", "hp_compare is undefined at the critical field");
    for (double h : c.h_list) {
      if (h == c.gamma_x) key_error("h", "hp_compare is undefined at the critical field");
    }
  }
  if (c.initial_state.kind == InitialStateChoice::Kind::eigenstate_index &&
      (c.initial_state.index < 0 || c.initial_state.index > 1)) {
    key_error("initial_state", "ground index must be 0 or 1");
  }
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig c;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    // Strip a comment that is not inside a string.
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line.erase(i);
        break;
      }
    }
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    const std::string where = "line " + std::to_string(lineno) + ": ";
    if (eq == std::string::npos) throw ValidationError(where + "expected 'key = value'");
    std::string key = line.substr(0, eq);
    key.erase(0, key.find_first_not_of(" \t"));
    key.erase(key.find_last_not_of(" \t") + 1);
    if (key.empty()) throw ValidationError(where + "missing key before '='");
    if (!seen.insert(key).second) throw ValidationError(where + "duplicate key '" + key + "'");
    try {
      apply_setting(c, key, line.substr(eq + 1));
    } catch (const ValidationError& e) {
      throw ValidationError(where + e.what());
    }
  }
  for (const char* required : {"j", "h0", "h"}) {
    if (!seen.count(required)) throw ValidationError(std::string("missing required key '") + required + "'");
  }
  validate_config(c);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str());
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

}  // namespace lmgdpt
