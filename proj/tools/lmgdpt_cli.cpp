// Copyright (C) 2026 lmgdpt contributors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end over the C API.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "lmgdpt/lmgdpt.h"

namespace {

using ConfigPtr = std::unique_ptr<lmgdpt_config, decltype(&lmgdpt_config_free)>;
using ManifestPtr = std::unique_ptr<lmgdpt_manifest, decltype(&lmgdpt_manifest_free)>;

struct Overrides {
  std::string config_path;
  std::map<std::string, std::string> values;  // key -> raw flag text
};

void add_config_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("-c,--config", o.config_path, "Config file (key = value lines)")->check(CLI::ExistingFile);
  for (size_t i = 0; i < lmgdpt_config_key_count(); ++i) {
    const std::string key = lmgdpt_config_key(i);
    std::string names = "--" + key;
    std::string dashed = key;
    for (char& ch : dashed) {
      if (ch == '_') ch = '-';
    }
    if (dashed != key) names += ",--" + dashed;
    cmd->add_option(names, o.values[key], "Overrides config key '" + key + "'");
  }
}

// Turns flag text into config-file syntax: "50,100" -> "[50,100]", paths quoted.
std::string to_config_value(const std::string& key, const std::string& raw) {
  if (raw.empty() || raw.front() == '[' || raw.front() == '"') return raw;
  if (key == "output_dir") {
    std::string quoted = "\"";
    for (char ch : raw) {
      if (ch == '"' || ch == '\\') quoted.push_back('\\');
      quoted.push_back(ch);
    }
    return quoted + "\"";
  }
  if (raw.find(',') != std::string::npos) return "[" + raw + "]";
  return raw;
}

int report(lmgdpt_status status) {
  if (status != LMGDPT_OK) std::fprintf(stderr, "error: %s\n", lmgdpt_last_error());
  switch (status) {
    case LMGDPT_OK:
      return 0;
    case LMGDPT_ERR_VALIDATION:
    case LMGDPT_ERR_ARGUMENT:
      return 1;
    case LMGDPT_ERR_NUMERICAL:
    case LMGDPT_ERR_INTERNAL:
      return 2;
    case LMGDPT_ERR_PARTIAL:
      return 3;
  }
  return 2;
}

// Builds the effective config: file (if any) then flag overrides.
lmgdpt_status build_config(const Overrides& o, ConfigPtr& out, bool validate) {
  lmgdpt_config* raw = nullptr;
  lmgdpt_status st = o.config_path.empty() ? lmgdpt_config_new(&raw) : lmgdpt_config_load(o.config_path.c_str(), &raw);
  if (st != LMGDPT_OK) return st;
  out.reset(raw);
  for (const auto& [key, value] : o.values) {
    if (value.empty()) continue;
    st = lmgdpt_config_set(raw, key.c_str(), to_config_value(key, value).c_str());
    if (st != LMGDPT_OK) return st;
  }
  return validate ? lmgdpt_config_validate(raw) : LMGDPT_OK;
}

nlohmann::json config_echo(const lmgdpt_config* config) {
  std::string text(lmgdpt_config_json(config, nullptr, 0) + 1, '\0');
  lmgdpt_config_json(config, text.data(), text.size());
  text.resize(text.size() - 1);
  return nlohmann::json::parse(text);
}

void print_manifest(const lmgdpt_manifest* m) {
  for (size_t i = 0; i < lmgdpt_manifest_size(m); ++i) {
    double j = 0.0;
    double h = 0.0;
    const char* csv = nullptr;
    const char* err = nullptr;
    const int code = lmgdpt_manifest_entry(m, i, &j, &h, &csv, &err);
    if (code == 0) {
      std::printf("ok     j=%g h=%g  %s\n", j, h, csv);
    } else {
      std::printf("FAILED j=%g h=%g  (%d) %s\n", j, h, code, err);
    }
  }
  std::printf("manifest: %s\n", lmgdpt_manifest_path(m));
}

int run_manifest_verb(const Overrides& o, bool single, bool hp) {
  ConfigPtr config(nullptr, lmgdpt_config_free);
  lmgdpt_status st = build_config(o, config, true);
  if (st != LMGDPT_OK) return report(st);
  if (single) {
    const nlohmann::json echo = config_echo(config.get());
    if (echo["j"].size() != 1 || echo["h"].size() != 1) {
      std::fprintf(stderr, "error: simulate takes exactly one j and one h; use sweep for lists\n");
      return 1;
    }
  }
  lmgdpt_manifest* raw = nullptr;
  st = hp ? lmgdpt_hp_run(config.get(), &raw) : lmgdpt_sweep_run(config.get(), &raw);
  ManifestPtr manifest(raw, lmgdpt_manifest_free);
  if (manifest) print_manifest(manifest.get());
  return report(st);
}

void warning_to_stderr(const char* message, void*) { std::fprintf(stderr, "warning: %s\n", message); }

}  // namespace

int main(int argc, char** argv) {
  lmgdpt_set_warning_callback(warning_to_stderr, nullptr);

  CLI::App app{"Quench dynamics, dynamical phase transitions and Wehrl entropy in the LMG model"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.set_version_flag("--version", lmgdpt_version());
  app.require_subcommand(1);

  Overrides sim_o;
  Overrides sweep_o;
  Overrides hp_o;
  Overrides an_o;
  bool print_config = false;

  CLI::App* simulate = app.add_subcommand("simulate", "Run a single quench");
  add_config_flags(simulate, sim_o);
  simulate->add_flag("--print-config", print_config, "Print the effective configuration and exit");

  CLI::App* sweep = app.add_subcommand("sweep", "Run every (j, h) pair of the configuration");
  add_config_flags(sweep, sweep_o);
  sweep->add_flag("--print-config", print_config, "Print the effective configuration and exit");

  CLI::App* hp = app.add_subcommand("hp", "Write the analytic Holstein-Primakoff curves only");
  add_config_flags(hp, hp_o);

  CLI::App* analyze = app.add_subcommand("analyze", "Re-run detection on an existing time-series CSV");
  std::string csv_in;
  std::string json_out;
  analyze->add_option("csv", csv_in, "Time-series CSV written by simulate or sweep")
      ->required()
      ->check(CLI::ExistingFile);
  analyze->add_option("-o,--out", json_out, "Detection JSON to write (default: <csv stem>_detect.json)");
  add_config_flags(analyze, an_o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (print_config) {
    const Overrides& o = simulate->parsed() ? sim_o : sweep_o;
    ConfigPtr config(nullptr, lmgdpt_config_free);
    const lmgdpt_status st = build_config(o, config, false);
    if (st != LMGDPT_OK) return report(st);
    std::printf("%s\n", config_echo(config.get()).dump(2).c_str());
    return 0;
  }
  if (simulate->parsed()) return run_manifest_verb(sim_o, true, false);
  if (sweep->parsed()) return run_manifest_verb(sweep_o, false, false);
  if (hp->parsed()) return run_manifest_verb(hp_o, false, true);

  ConfigPtr config(nullptr, lmgdpt_config_free);
  lmgdpt_status st = build_config(an_o, config, false);
  if (st != LMGDPT_OK) return report(st);
  if (json_out.empty()) {
    json_out = csv_in;
    const auto dot = json_out.rfind(".csv");
    if (dot != std::string::npos && dot + 4 == json_out.size()) json_out.resize(dot);
    json_out += "_detect.json";
  }
  st = lmgdpt_analyze_csv(csv_in.c_str(), config.get(), json_out.c_str());
  if (st == LMGDPT_OK) std::printf("detection: %s\n", json_out.c_str());
  return report(st);
}
