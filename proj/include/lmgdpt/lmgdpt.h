/* Copyright (C) 2026 lmgdpt contributors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the lmgdpt library. Objects are opaque handles owned by the
 * caller and released with the matching *_free function. Every fallible call
 * returns an lmgdpt_status; on failure lmgdpt_last_error() describes the
 * problem (per thread, valid until the next failing call on that thread).
 */

#ifndef LMGDPT_H
#define LMGDPT_H

#include <stddef.h>

#if defined(_WIN32)
#  if defined(LMGDPT_BUILDING)
#    define LMGDPT_API __declspec(dllexport)
#  else
#    define LMGDPT_API __declspec(dllimport)
#  endif
#elif defined(__GNUC__) && __GNUC__ >= 4
#  define LMGDPT_API __attribute__((visibility("default")))
#else
#  define LMGDPT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lmgdpt_status {
  LMGDPT_OK = 0,
  LMGDPT_ERR_VALIDATION = 1,
  LMGDPT_ERR_NUMERICAL = 2,
  LMGDPT_ERR_PARTIAL = 3,
  LMGDPT_ERR_ARGUMENT = 4,
  LMGDPT_ERR_INTERNAL = 5
} lmgdpt_status;

typedef struct lmgdpt_config lmgdpt_config;
typedef struct lmgdpt_quench lmgdpt_quench;
typedef struct lmgdpt_manifest lmgdpt_manifest;

typedef void (*lmgdpt_warning_fn)(const char* message, void* user_data);

LMGDPT_API const char* lmgdpt_version(void);
LMGDPT_API const char* lmgdpt_last_error(void);
/* NULL restores the default (stderr). */
LMGDPT_API void lmgdpt_set_warning_callback(lmgdpt_warning_fn fn, void* user_data);

/* Configuration. A config from lmgdpt_config_new carries defaults only; j, h0
 * and h must be set before running. */
LMGDPT_API lmgdpt_status lmgdpt_config_new(lmgdpt_config** out);
LMGDPT_API lmgdpt_status lmgdpt_config_parse(const char* text, lmgdpt_config** out);
LMGDPT_API lmgdpt_status lmgdpt_config_load(const char* path, lmgdpt_config** out);
/* `value` uses config-file syntax, e.g. "[50, 100]" or "true". */
LMGDPT_API lmgdpt_status lmgdpt_config_set(lmgdpt_config* config, const char* key, const char* value);
LMGDPT_API lmgdpt_status lmgdpt_config_validate(const lmgdpt_config* config);
LMGDPT_API void lmgdpt_config_free(lmgdpt_config* config);
/* Compact JSON of the effective configuration. Returns the length without the
 * terminator; at most `capacity` bytes including the terminator are written. */
LMGDPT_API size_t lmgdpt_config_json(const lmgdpt_config* config, char* out, size_t capacity);
/* Accepted keys, index 0 .. lmgdpt_config_key_count() - 1; NULL past the end. */
LMGDPT_API size_t lmgdpt_config_key_count(void);
LMGDPT_API const char* lmgdpt_config_key(size_t index);

/* Single quench held in memory. */
LMGDPT_API lmgdpt_status lmgdpt_quench_run(const lmgdpt_config* config, double j, double h, lmgdpt_quench** out);
LMGDPT_API size_t lmgdpt_quench_length(const lmgdpt_quench* quench);
/* Columns: t, log_L, r, r_s, r_m, plateau, S_Q, Pi_Q, Pi_Q_rich, Pi_polar, L_hp, r_hp.
 * `n` must equal lmgdpt_quench_length. Absent optional columns give
 * LMGDPT_ERR_ARGUMENT. */
LMGDPT_API lmgdpt_status lmgdpt_quench_column(const lmgdpt_quench* quench, const char* name, double* out, size_t n);
/* Return the total count; at most `capacity` values are copied. */
LMGDPT_API size_t lmgdpt_quench_critical_times(const lmgdpt_quench* quench, double* out, size_t capacity);
LMGDPT_API size_t lmgdpt_quench_entropy_peaks(const lmgdpt_quench* quench, double* out, size_t capacity);
/* 1 and the fit values if at least two (t_c, t_m) pairs exist, else 0. */
LMGDPT_API int lmgdpt_quench_fit(const lmgdpt_quench* quench, double* slope, double* intercept, double* correlation);
LMGDPT_API int lmgdpt_quench_degeneracy(const lmgdpt_quench* quench);
LMGDPT_API lmgdpt_status lmgdpt_quench_write(const lmgdpt_quench* quench, const lmgdpt_config* config,
                                             const char* csv_path, const char* detection_path);
LMGDPT_API void lmgdpt_quench_free(lmgdpt_quench* quench);

/* Sweeps write their files under output_dir and return a manifest handle in
 * `out` even when some runs fail (status LMGDPT_ERR_PARTIAL). */
LMGDPT_API lmgdpt_status lmgdpt_sweep_run(const lmgdpt_config* config, lmgdpt_manifest** out);
LMGDPT_API lmgdpt_status lmgdpt_hp_run(const lmgdpt_config* config, lmgdpt_manifest** out);
LMGDPT_API const char* lmgdpt_manifest_path(const lmgdpt_manifest* manifest);
LMGDPT_API size_t lmgdpt_manifest_size(const lmgdpt_manifest* manifest);
/* Returns the run's error code (0 on success). Strings stay valid for the
 * lifetime of the manifest; any output pointer may be NULL. */
LMGDPT_API int lmgdpt_manifest_entry(const lmgdpt_manifest* manifest, size_t index, double* j, double* h,
                                     const char** csv_path, const char** error);
LMGDPT_API void lmgdpt_manifest_free(lmgdpt_manifest* manifest);

LMGDPT_API lmgdpt_status lmgdpt_analyze_csv(const char* csv_path, const lmgdpt_config* config, const char* out_path);

/* Closed-form HP curves. `reading` is as_printed, squared, gaussian_overlap
 * or NULL for the default (gaussian_overlap). */
LMGDPT_API lmgdpt_status lmgdpt_hp_rate(double h0, double h, double gamma_x, double t, const char* reading,
                                        double* out);
LMGDPT_API lmgdpt_status lmgdpt_hp_loschmidt(double j, double h0, double h, double gamma_x, double t,
                                             const char* reading, double* out);

#ifdef __cplusplus
}
#endif

#endif /* LMGDPT_H */
