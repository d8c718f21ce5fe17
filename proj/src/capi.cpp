// Copyright (C) 2026 lmgdpt contributors
// SPDX-License-Identifier: Apache-2.0
//

#include "lmgdpt/lmgdpt.h"

#include <algorithm>
#include <cstring>
#include <string>

#include "lmgdpt/error.hpp"
#include "lmgdpt/runner.hpp"

struct lmgdpt_config {
  lmgdpt::ExperimentConfig value;
};

struct lmgdpt_quench {
  lmgdpt::QuenchResult value;
};

struct lmgdpt_manifest {
  lmgdpt::RunManifest value;
};

namespace {

thread_local std::string g_last_error;

lmgdpt_status fail(lmgdpt_status code, const std::string& message) {
  g_last_error = message;
  return code;
}

template <class F>
lmgdpt_status guarded(F&& body) {
  try {
    return body();
  } catch (const lmgdpt::ValidationError& e) {
    return fail(LMGDPT_ERR_VALIDATION, e.what());
  } catch (const lmgdpt::NumericalError& e) {
    return fail(LMGDPT_ERR_NUMERICAL, e.what());
  } catch (const std::bad_alloc&) {
    return fail(LMGDPT_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(LMGDPT_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(LMGDPT_ERR_INTERNAL, "unknown error");
  }
}

lmgdpt::ExponentReading reading_or_default(const char* reading) {
  return reading == nullptr ? lmgdpt::ExponentReading::gaussian_overlap : lmgdpt::parse_exponent_reading(reading);
}

}  // namespace

extern "C" {

const char* lmgdpt_version(void) { return lmgdpt::kVersion; }

const char* lmgdpt_last_error(void) { return g_last_error.c_str(); }

void lmgdpt_set_warning_callback(lmgdpt_warning_fn fn, void* user_data) { lmgdpt::set_warning_sink(fn, user_data); }

lmgdpt_status lmgdpt_config_new(lmgdpt_config** out) {
  if (out == nullptr) return fail(LMGDPT_ERR_ARGUMENT, "null output pointer");
  return guarded([&] {
    *out = new lmgdpt_config{};
    return LMGDPT_OK;
  });
}

lmgdpt_status lmgdpt_config_parse(const char* text, lmgdpt_config** out) {
  if (text == nullptr || out == nullptr) return fail(LMGDPT_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new lmgdpt_config{lmgdpt::parse_config(text)};
    return LMGDPT_OK;
  });
}

lmgdpt_status lmgdpt_config_load(const char* path, lmgdpt_config** out) {
  if (path == nullptr || out == nullptr) return fail(LMGDPT_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new lmgdpt_config{lmgdpt::load_config(path)};
    return LMGDPT_OK;
  });
}

lmgdpt_status lmgdpt_config_set(lmgdpt_config* config, const char* key, const char* value) {
  if (config == nullptr || key == nullptr || value == nullptr) return fail(LMGDPT_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    lmgdpt::apply_setting(config->value, key, value);
    return LMGDPT_OK;
  });
}

lmgdpt_status lmgdpt_config_validate(const lmgdpt_config* config) {
  if (config == nullptr) return fail(LMGDPT_ERR_ARGUMENT, "null config");
  return guarded([&] {
    lmgdpt::validate_config(config->value);
    return LMGDPT_OK;
  });
}

void lmgdpt_config_free(lmgdpt_config* config) { delete config; }

size_t lmgdpt_config_json(const lmgdpt_config* config, char* out, size_t capacity) {
  if (config == nullptr) return 0;
  const std::string text = lmgdpt::config_to_json(config->value);
  if (out != nullptr && capacity > 0) {
    const size_t n = std::min(capacity - 1, text.size());
    std::memcpy(out, text.data(), n);
    out[n] = '\0';
  }
  return text.size();
}

size_t lmgdpt_config_key_count(void) { return lmgdpt::config_keys().size(); }

const char* lmgdpt_config_key(size_t index) {
  const auto& keys = lmgdpt::config_keys();
  return index < keys.size() ? keys[index].c_str() : nullptr;
}

lmgdpt_status lmgdpt_quench_run(const lmgdpt_config* config, double j, double h, lmgdpt_quench** out) {
  if (config == nullptr || out == nullptr) return fail(LMGDPT_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new lmgdpt_quench{lmgdpt::compute_quench(config->value, j, h)};
    return LMGDPT_OK;
  });
}

size_t lmgdpt_quench_length(const lmgdpt_quench* quench) {
  return quench == nullptr ? 0 : static_cast<size_t>(quench->value.times.size());
}

lmgdpt_status lmgdpt_quench_column(const lmgdpt_quench* quench, const char* name, double* out, size_t n) {
  if (quench == nullptr || name == nullptr || out == nullptr) return fail(LMGDPT_ERR_ARGUMENT, "null argument");
  const lmgdpt::QuenchResult& q = quench->value;
  if (n != static_cast<size_t>(q.times.size())) return fail(LMGDPT_ERR_ARGUMENT, "buffer length mismatch");
  const std::string col = name;
  const lmgdpt::RealVector* src = nullptr;
  if (col == "t") {
    src = &q.times;
  } else if (col == "log_L") {
    src = &q.log_echo;
  } else if (col == "r") {
    src = &q.r.r.values;
  } else if (col == "r_s") {
    src = &q.r_s.r.values;
  } else if (col == "r_m") {
    src = &q.r_m.r.values;
  } else if (col == "plateau") {
    for (size_t k = 0; k < n; ++k) out[k] = q.r.plateau[k] ? 1.0 : 0.0;
    return LMGDPT_OK;
  } else if (col == "S_Q" && q.wehrl) {
    src = &q.wehrl->values;
  } else if (col == "Pi_Q" && q.production) {
    src = &q.production->values;
  } else if (col == "Pi_Q_rich" && q.production_richardson) {
    src = &*q.production_richardson;
  } else if (col == "Pi_polar" && q.polar) {
    src = &*q.polar;
  } else if (col == "L_hp" && q.hp_echo) {
    src = &*q.hp_echo;
  } else if (col == "r_hp" && q.hp_rate) {
    src = &*q.hp_rate;
  }
  if (src == nullptr) return fail(LMGDPT_ERR_ARGUMENT, "column '" + col + "' is not available");
  std::copy(src->data(), src->data() + n, out);
  return LMGDPT_OK;
}

size_t lmgdpt_quench_critical_times(const lmgdpt_quench* quench, double* out, size_t capacity) {
  if (quench == nullptr) return 0;
  const auto& v = quench->value.kinks.times;
  if (out != nullptr) std::copy_n(v.begin(), std::min(capacity, v.size()), out);
  return v.size();
}

size_t lmgdpt_quench_entropy_peaks(const lmgdpt_quench* quench, double* out, size_t capacity) {
  if (quench == nullptr) return 0;
  const auto& v = quench->value.peaks.times;
  if (out != nullptr) std::copy_n(v.begin(), std::min(capacity, v.size()), out);
  return v.size();
}

int lmgdpt_quench_fit(const lmgdpt_quench* quench, double* slope, double* intercept, double* correlation) {
  if (quench == nullptr || !quench->value.report.fit) return 0;
  const auto& fit = *quench->value.report.fit;
  if (slope != nullptr) *slope = fit.slope;
  if (intercept != nullptr) *intercept = fit.intercept;
  if (correlation != nullptr) *correlation = fit.correlation;
  return 1;
}

int lmgdpt_quench_degeneracy(const lmgdpt_quench* quench) { return quench == nullptr ? 0 : quench->value.g; }

lmgdpt_status lmgdpt_quench_write(const lmgdpt_quench* quench, const lmgdpt_config* config, const char* csv_path,
                                  const char* detection_path) {
  if (quench == nullptr || config == nullptr) return fail(LMGDPT_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    if (csv_path != nullptr) lmgdpt::write_timeseries_csv(quench->value, csv_path);
    if (detection_path != nullptr) lmgdpt::write_detection_json(quench->value, config->value, detection_path);
    return LMGDPT_OK;
  });
}

void lmgdpt_quench_free(lmgdpt_quench* quench) { delete quench; }

lmgdpt_status lmgdpt_sweep_run(const lmgdpt_config* config, lmgdpt_manifest** out) {
  if (config == nullptr || out == nullptr) return fail(LMGDPT_ERR_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new lmgdpt_manifest{lmgdpt::run_sweep(config->value)};
    if ((*out)->value.all_ok()) return LMGDPT_OK;
    return fail(LMGDPT_ERR_PARTIAL, "one or more runs failed; see the manifest");
  });
}

lmgdpt_status lmgdpt_hp_run(const lmgdpt_config* config, lmgdpt_manifest** out) {
  if (config == nullptr || out == nullptr) return fail(LMGDPT_ERR_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new lmgdpt_manifest{lmgdpt::run_hp(config->value)};
    if ((*out)->value.all_ok()) return LMGDPT_OK;
    return fail(LMGDPT_ERR_PARTIAL, "one or more curves failed; see the manifest");
  });
}

const char* lmgdpt_manifest_path(const lmgdpt_manifest* manifest) {
  return manifest == nullptr ? "" : manifest->value.manifest_path.c_str();
}

size_t lmgdpt_manifest_size(const lmgdpt_manifest* manifest) {
  return manifest == nullptr ? 0 : manifest->value.runs.size();
}

int lmgdpt_manifest_entry(const lmgdpt_manifest* manifest, size_t index, double* j, double* h,
                          const char** csv_path, const char** error) {
  if (manifest == nullptr || index >= manifest->value.runs.size()) return -1;
  const lmgdpt::RunEntry& e = manifest->value.runs[index];
  if (j != nullptr) *j = e.j;
  if (h != nullptr) *h = e.h;
  if (csv_path != nullptr) *csv_path = e.csv_path.c_str();
  if (error != nullptr) *error = e.error.c_str();
  return e.error_code;
}

void lmgdpt_manifest_free(lmgdpt_manifest* manifest) { delete manifest; }

lmgdpt_status lmgdpt_analyze_csv(const char* csv_path, const lmgdpt_config* config, const char* out_path) {
  if (csv_path == nullptr || config == nullptr || out_path == nullptr) {
    return fail(LMGDPT_ERR_ARGUMENT, "null argument");
  }
  return guarded([&] {
    lmgdpt::analyze_csv(csv_path, config->value, out_path);
    return LMGDPT_OK;
  });
}

lmgdpt_status lmgdpt_hp_rate(double h0, double h, double gamma_x, double t, const char* reading, double* out) {
  if (out == nullptr) return fail(LMGDPT_ERR_ARGUMENT, "null output pointer");
  return guarded([&] {
    *out = lmgdpt::hp_rate(h0, h, gamma_x, t, reading_or_default(reading));
    return LMGDPT_OK;
  });
}

lmgdpt_status lmgdpt_hp_loschmidt(double j, double h0, double h, double gamma_x, double t, const char* reading,
                                  double* out) {
  if (out == nullptr) return fail(LMGDPT_ERR_ARGUMENT, "null output pointer");
  return guarded([&] {
    *out = lmgdpt::hp_loschmidt(j, h0, h, gamma_x, t, reading_or_default(reading));
    return LMGDPT_OK;
  });
}

}  // extern "C"
