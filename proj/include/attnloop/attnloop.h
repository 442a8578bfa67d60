/*
 * Copyright 2026 The attnloop Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C API of the attnloop shared library.
 *
 * All objects are opaque handles created and released by the library; every
 * fallible call returns an attn_status and leaves a human-readable message
 * in attn_last_error() (thread-local, valid until the thread's next API
 * call). Out-parameters are written only on ATTN_OK.
 *
 * Status codes match the CLI exit-code contract: 2 config, 3 I/O,
 * 4 insufficient data.
 */

#ifndef ATTNLOOP_ATTNLOOP_H_
#define ATTNLOOP_ATTNLOOP_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define ATTN_API __declspec(dllexport)
#else
#define ATTN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum attn_status {
  ATTN_OK = 0,
  ATTN_E_USAGE = 1,             /* API misuse: bad argument, null handle */
  ATTN_E_CONFIG = 2,            /* invalid model configuration */
  ATTN_E_IO = 3,                /* unreadable, unwritable or corrupt file */
  ATTN_E_INSUFFICIENT_DATA = 4, /* estimator cannot run on this input */
  ATTN_E_DEGENERATE = 5         /* degenerate data, e.g. zero-variance t-test */
} attn_status;

typedef struct attn_params attn_params;     /* model configuration */
typedef struct attn_log attn_log;           /* event log */
typedef struct attn_snapshot attn_snapshot; /* fan-count snapshot */
typedef struct attn_hist attn_hist;         /* contribution histogram */
typedef struct attn_series attn_series;     /* labeled output table */
typedef struct attn_report attn_report;     /* JSON report builder */

/* Event log file formats. */
typedef enum attn_format {
  ATTN_FORMAT_AUTO = 0, /* by file extension, falling back to content */
  ATTN_FORMAT_JSONL = 1,
  ATTN_FORMAT_CSV = 2
} attn_format;

typedef struct attn_sim_options {
  uint64_t n_users;
  uint64_t master_seed;
  int64_t start_time;   /* epoch seconds */
  int64_t capture_time; /* must be > start_time */
  /* > 0 staggers user arrivals uniformly over this many seconds. */
  double arrival_spread_seconds;
  /* >= 0 also emits a fan snapshot taken at this instant; < 0 disables. */
  int64_t snapshot_time;
  int threads; /* 0 = auto; capped by ATTN_LOOP_THREADS */
} attn_sim_options;

typedef struct attn_powerlaw_fit {
  double alpha_hat;
  uint64_t x_min;
  uint64_t n_tail;
  double log_likelihood;
} attn_powerlaw_fit;

/* ---- meta ---------------------------------------------------------- */

ATTN_API const char* attn_version(void);
ATTN_API const char* attn_last_error(void);
ATTN_API const char* attn_status_name(attn_status status);
ATTN_API void attn_string_free(char* s);

/* SHA-256 of a file's bytes as lowercase hex; out_hex must hold 65 bytes. */
ATTN_API attn_status attn_sha256_file(const char* path, char* out_hex);

/* ---- model configuration ------------------------------------------ */

ATTN_API attn_status attn_params_load(const char* path, attn_params** out);
ATTN_API attn_status attn_params_parse(const char* text, attn_params** out);
/* Canonical `key = value` rendering; free with attn_string_free. */
ATTN_API attn_status attn_params_format(const attn_params* params, char** out_text);
ATTN_API attn_status attn_params_n_cap(const attn_params* params, uint64_t* out);
ATTN_API void attn_params_free(attn_params* params);

/* ---- simulation ---------------------------------------------------- */

ATTN_API void attn_sim_options_init(attn_sim_options* options);

/* out_snapshot may be NULL when options->snapshot_time < 0. */
ATTN_API attn_status attn_simulate(const attn_params* params, const attn_sim_options* options,
                                   attn_log** out_log, attn_snapshot** out_snapshot);

/* Final contribution counts only (complete lifetimes, no records kept). */
ATTN_API attn_status attn_simulate_counts(const attn_params* params, uint64_t n_users,
                                          uint64_t master_seed, int threads, attn_hist** out);

/* ---- event logs ----------------------------------------------------- */

/* capture_override < 0 keeps the file's #capture_time header. */
ATTN_API attn_status attn_log_read(const char* path, attn_format format,
                                   int64_t capture_override, attn_log** out);
ATTN_API attn_status attn_log_write(const attn_log* log, const char* path, attn_format format);
ATTN_API attn_status attn_log_record_count(const attn_log* log, uint64_t* out);
ATTN_API attn_status attn_log_capture_time(const attn_log* log, int64_t* out);
/* Digest of the canonical JSON Lines serialization; out_hex holds 65 bytes. */
ATTN_API attn_status attn_log_digest(const attn_log* log, char* out_hex);
ATTN_API void attn_log_free(attn_log* log);

ATTN_API attn_status attn_snapshot_read(const char* path, attn_snapshot** out);
ATTN_API attn_status attn_snapshot_write(const attn_snapshot* snap, const char* path);
ATTN_API void attn_snapshot_free(attn_snapshot* snap);

/* ---- estimators ----------------------------------------------------- */

ATTN_API attn_status attn_histogram(const attn_log* log, double inactivity_cutoff_seconds,
                                    attn_hist** out);
ATTN_API attn_status attn_hist_total_users(const attn_hist* hist, uint64_t* out);
ATTN_API attn_status attn_hist_excluded_users(const attn_hist* hist, uint64_t* out);
ATTN_API attn_status attn_hist_count(const attn_hist* hist, uint64_t n, uint64_t* out);
/* (n, users) table for CSV/JSON output. */
ATTN_API attn_status attn_hist_series(const attn_hist* hist, attn_series** out);
ATTN_API void attn_hist_free(attn_hist* hist);

ATTN_API attn_status attn_hazard(const attn_hist* hist, attn_series** out);
ATTN_API attn_status attn_fit_geometric(const attn_hist* hist, double* p_hat);
ATTN_API attn_status attn_fit_powerlaw(const attn_hist* hist, uint64_t x_min,
                                       attn_powerlaw_fit* out);
/* Positive favors the power law over the tail-conditional geometric. */
ATTN_API attn_status attn_compare_fits(const attn_hist* hist, uint64_t x_min, double* out_llr);

ATTN_API attn_status attn_popularity_threshold(const attn_log* log, double q, double* out);
ATTN_API attn_status attn_reverse_index_ratio(const attn_log* log, uint32_t K, double threshold,
                                              double inactivity_cutoff_seconds,
                                              attn_series** out);
ATTN_API attn_status attn_weekly_final_ratio(const attn_log* log, double threshold,
                                             double finality_lag_seconds, attn_series** out_all,
                                             attn_series** out_final, double* out_t_stat,
                                             double* out_p_value);
ATTN_API attn_status attn_paired_t_test_less(const double* x, const double* y, size_t len,
                                             double* out_t_stat, double* out_p_value);

/* Fan-join analysis: pow2-binned mean fans by past productivity (one point
 * per user) and mean attention by fan count (one point per in-window
 * record). exclude_users_path may be NULL. */
ATTN_API attn_status attn_fan_bins(const attn_log* log, const attn_snapshot* snap,
                                   int64_t window_start, int64_t window_end,
                                   const char* exclude_users_path,
                                   attn_series** out_fans_vs_productivity,
                                   attn_series** out_attention_vs_fans);

ATTN_API attn_status attn_linear_fit(const double* x, const double* y, size_t len,
                                     double* out_slope, double* out_intercept, double* out_r2);

/* ---- series --------------------------------------------------------- */

ATTN_API attn_status attn_series_len(const attn_series* series, size_t* out);
ATTN_API const char* attn_series_name(const attn_series* series);
/* Returned pointers stay valid while the series handle lives. */
ATTN_API const char* attn_series_label(const attn_series* series, size_t i);
ATTN_API attn_status attn_series_value(const attn_series* series, size_t i, double* out);
ATTN_API attn_status attn_series_count(const attn_series* series, size_t i, uint64_t* out);
/* Extra numeric columns, e.g. "lo", "hi", "mean_key" on binned series. */
ATTN_API attn_status attn_series_extra(const attn_series* series, const char* column, size_t i,
                                       double* out);
ATTN_API attn_status attn_series_write_csv(const attn_series* series, const char* path);
ATTN_API void attn_series_free(attn_series* series);

/* ---- reports & manifests -------------------------------------------- */

ATTN_API attn_status attn_report_new(const char* analysis, attn_report** out);
ATTN_API attn_status attn_report_add_option_text(attn_report* report, const char* name,
                                                 const char* value);
ATTN_API attn_status attn_report_add_option_num(attn_report* report, const char* name,
                                                double value);
ATTN_API attn_status attn_report_add_scalar(attn_report* report, const char* name, double value);
ATTN_API attn_status attn_report_add_text(attn_report* report, const char* name,
                                          const char* value);
ATTN_API attn_status attn_report_add_series(attn_report* report, const attn_series* series);
ATTN_API attn_status attn_report_write_json(const attn_report* report, const char* path);
ATTN_API void attn_report_free(attn_report* report);

ATTN_API attn_status attn_manifest_write(const char* path, const char* subcommand,
                                         const char* config_digest_hex, uint64_t master_seed,
                                         int64_t n_cap_used);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* ATTNLOOP_ATTNLOOP_H_ */
