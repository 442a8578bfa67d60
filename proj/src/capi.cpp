// Copyright 2026 The attnloop Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "attnloop/attnloop.h"

#include <cstring>
#include <string>

#include "attnloop/errors.hpp"
#include "attnloop/estimators.hpp"
#include "attnloop/ingest.hpp"
#include "attnloop/io.hpp"
#include "attnloop/model.hpp"
#include "attnloop/simulate.hpp"
#include "attnloop/stats.hpp"
#include "attnloop/version.hpp"

struct attn_params {
  attnloop::ModelParams v;
};
struct attn_log {
  attnloop::EventLog v;
};
struct attn_snapshot {
  attnloop::FanSnapshot v;
};
struct attn_hist {
  attnloop::ContributionHistogram v;
};
struct attn_series {
  attnloop::Series v;
};
struct attn_report {
  attnloop::Report v{""};
};

namespace {

thread_local std::string g_last_error;

attn_status fail(attn_status code, const char* what) {
  g_last_error = what;
  return code;
}

template <typename Fn>
attn_status guarded(Fn&& fn) {
  try {
    fn();
    return ATTN_OK;
  } catch (const attnloop::ConfigError& e) {
    return fail(ATTN_E_CONFIG, e.what());
  } catch (const attnloop::IoError& e) {
    return fail(ATTN_E_IO, e.what());
  } catch (const attnloop::InsufficientDataError& e) {
    return fail(ATTN_E_INSUFFICIENT_DATA, e.what());
  } catch (const attnloop::DegenerateDataError& e) {
    return fail(ATTN_E_DEGENERATE, e.what());
  } catch (const std::exception& e) {
    return fail(ATTN_E_USAGE, e.what());
  }
}

attn_status require(bool ok, const char* what) {
  return ok ? ATTN_OK : fail(ATTN_E_USAGE, what);
}

attnloop::LogFormat to_format(attn_format f) {
  switch (f) {
    case ATTN_FORMAT_JSONL: return attnloop::LogFormat::kJsonLines;
    case ATTN_FORMAT_CSV: return attnloop::LogFormat::kCsv;
    case ATTN_FORMAT_AUTO: break;
  }
  return attnloop::LogFormat::kAuto;
}

void copy_hex(const std::string& hex, char* out) {
  std::memcpy(out, hex.c_str(), hex.size() + 1);
}

}  // namespace

extern "C" {

const char* attn_version(void) { return attnloop::kVersion; }

const char* attn_last_error(void) { return g_last_error.c_str(); }

const char* attn_status_name(attn_status status) {
  switch (status) {
    case ATTN_OK: return "ok";
    case ATTN_E_USAGE: return "usage error";
    case ATTN_E_CONFIG: return "config error";
    case ATTN_E_IO: return "io error";
    case ATTN_E_INSUFFICIENT_DATA: return "insufficient data";
    case ATTN_E_DEGENERATE: return "degenerate data";
  }
  return "unknown";
}

void attn_string_free(char* s) { delete[] s; }

attn_status attn_sha256_file(const char* path, char* out_hex) {
  if (attn_status s = require(path && out_hex, "attn_sha256_file: null argument")) return s;
  return guarded([&] { copy_hex(attnloop::sha256_file(path), out_hex); });
}

attn_status attn_params_load(const char* path, attn_params** out) {
  if (attn_status s = require(path && out, "attn_params_load: null argument")) return s;
  return guarded([&] { *out = new attn_params{attnloop::ModelParams::load(path)}; });
}

attn_status attn_params_parse(const char* text, attn_params** out) {
  if (attn_status s = require(text && out, "attn_params_parse: null argument")) return s;
  return guarded([&] { *out = new attn_params{attnloop::ModelParams::from_config(text)}; });
}

attn_status attn_params_format(const attn_params* params, char** out_text) {
  if (attn_status s = require(params && out_text, "attn_params_format: null argument")) return s;
  return guarded([&] {
    const std::string text = params->v.to_config();
    char* buf = new char[text.size() + 1];
    std::memcpy(buf, text.c_str(), text.size() + 1);
    *out_text = buf;
  });
}

attn_status attn_params_n_cap(const attn_params* params, uint64_t* out) {
  if (attn_status s = require(params && out, "attn_params_n_cap: null argument")) return s;
  *out = params->v.n_cap;
  return ATTN_OK;
}

void attn_params_free(attn_params* params) { delete params; }

void attn_sim_options_init(attn_sim_options* options) {
  if (options == nullptr) return;
  options->n_users = 0;
  options->master_seed = 0;
  options->start_time = 0;
  options->capture_time = 0;
  options->arrival_spread_seconds = 0.0;
  options->snapshot_time = -1;
  options->threads = 0;
}

attn_status attn_simulate(const attn_params* params, const attn_sim_options* options,
                          attn_log** out_log, attn_snapshot** out_snapshot) {
  if (attn_status s = require(params && options && out_log, "attn_simulate: null argument")) {
    return s;
  }
  if (attn_status s = require(options->snapshot_time < 0 || out_snapshot != nullptr,
                              "attn_simulate: snapshot requested but out_snapshot is null")) {
    return s;
  }
  return guarded([&] {
    attnloop::SimOptions opts;
    opts.n_users = options->n_users;
    opts.master_seed = options->master_seed;
    opts.start_time = options->start_time;
    opts.capture_time = options->capture_time;
    opts.arrival_spread_seconds = options->arrival_spread_seconds;
    if (options->snapshot_time >= 0) opts.snapshot_time = options->snapshot_time;
    opts.threads = options->threads;
    auto result = attnloop::simulate_population(params->v, opts);
    *out_log = new attn_log{std::move(result.log)};
    if (out_snapshot != nullptr) {
      *out_snapshot = result.snapshot ? new attn_snapshot{std::move(*result.snapshot)} : nullptr;
    }
  });
}

attn_status attn_simulate_counts(const attn_params* params, uint64_t n_users,
                                 uint64_t master_seed, int threads, attn_hist** out) {
  if (attn_status s = require(params && out, "attn_simulate_counts: null argument")) return s;
  return guarded([&] {
    attnloop::ContributionHistogram hist;
    hist.counts = attnloop::simulate_final_counts(params->v, n_users, master_seed, threads);
    for (const auto& [n, c] : hist.counts) hist.total_users += c;
    *out = new attn_hist{std::move(hist)};
  });
}

attn_status attn_log_read(const char* path, attn_format format, int64_t capture_override,
                          attn_log** out) {
  if (attn_status s = require(path && out, "attn_log_read: null argument")) return s;
  return guarded([&] {
    std::optional<std::int64_t> cap;
    if (capture_override >= 0) cap = capture_override;
    *out = new attn_log{attnloop::read_event_log(path, to_format(format), cap)};
  });
}

attn_status attn_log_write(const attn_log* log, const char* path, attn_format format) {
  if (attn_status s = require(log && path, "attn_log_write: null argument")) return s;
  return guarded([&] { attnloop::write_event_log(log->v, path, to_format(format)); });
}

attn_status attn_log_record_count(const attn_log* log, uint64_t* out) {
  if (attn_status s = require(log && out, "attn_log_record_count: null argument")) return s;
  *out = log->v.records.size();
  return ATTN_OK;
}

attn_status attn_log_capture_time(const attn_log* log, int64_t* out) {
  if (attn_status s = require(log && out, "attn_log_capture_time: null argument")) return s;
  *out = log->v.capture_time;
  return ATTN_OK;
}

attn_status attn_log_digest(const attn_log* log, char* out_hex) {
  if (attn_status s = require(log && out_hex, "attn_log_digest: null argument")) return s;
  return guarded([&] {
    copy_hex(attnloop::sha256_hex(
                 attnloop::serialize_event_log(log->v, attnloop::LogFormat::kJsonLines)),
             out_hex);
  });
}

void attn_log_free(attn_log* log) { delete log; }

attn_status attn_snapshot_read(const char* path, attn_snapshot** out) {
  if (attn_status s = require(path && out, "attn_snapshot_read: null argument")) return s;
  return guarded([&] { *out = new attn_snapshot{attnloop::read_fan_snapshot(path)}; });
}

attn_status attn_snapshot_write(const attn_snapshot* snap, const char* path) {
  if (attn_status s = require(snap && path, "attn_snapshot_write: null argument")) return s;
  return guarded([&] { attnloop::write_fan_snapshot(snap->v, path); });
}

void attn_snapshot_free(attn_snapshot* snap) { delete snap; }

attn_status attn_histogram(const attn_log* log, double inactivity_cutoff_seconds,
                           attn_hist** out) {
  if (attn_status s = require(log && out, "attn_histogram: null argument")) return s;
  return guarded([&] {
    *out = new attn_hist{attnloop::contribution_histogram(log->v, inactivity_cutoff_seconds)};
  });
}

attn_status attn_hist_total_users(const attn_hist* hist, uint64_t* out) {
  if (attn_status s = require(hist && out, "attn_hist_total_users: null argument")) return s;
  *out = hist->v.total_users;
  return ATTN_OK;
}

attn_status attn_hist_excluded_users(const attn_hist* hist, uint64_t* out) {
  if (attn_status s = require(hist && out, "attn_hist_excluded_users: null argument")) return s;
  *out = hist->v.excluded_users;
  return ATTN_OK;
}

attn_status attn_hist_count(const attn_hist* hist, uint64_t n, uint64_t* out) {
  if (attn_status s = require(hist && out, "attn_hist_count: null argument")) return s;
  *out = hist->v.count_at(n);
  return ATTN_OK;
}

attn_status attn_hist_series(const attn_hist* hist, attn_series** out) {
  if (attn_status s = require(hist && out, "attn_hist_series: null argument")) return s;
  return guarded([&] { *out = new attn_series{attnloop::series_from_histogram(hist->v)}; });
}

void attn_hist_free(attn_hist* hist) { delete hist; }

attn_status attn_hazard(const attn_hist* hist, attn_series** out) {
  if (attn_status s = require(hist && out, "attn_hazard: null argument")) return s;
  return guarded(
      [&] { *out = new attn_series{attnloop::series_from_hazard(attnloop::hazard(hist->v))}; });
}

attn_status attn_fit_geometric(const attn_hist* hist, double* p_hat) {
  if (attn_status s = require(hist && p_hat, "attn_fit_geometric: null argument")) return s;
  return guarded([&] { *p_hat = attnloop::fit_geometric(hist->v); });
}

attn_status attn_fit_powerlaw(const attn_hist* hist, uint64_t x_min, attn_powerlaw_fit* out) {
  if (attn_status s = require(hist && out, "attn_fit_powerlaw: null argument")) return s;
  return guarded([&] {
    const auto fit = attnloop::fit_powerlaw(hist->v, x_min);
    out->alpha_hat = fit.alpha_hat;
    out->x_min = fit.x_min;
    out->n_tail = fit.n_tail;
    out->log_likelihood = fit.log_likelihood;
  });
}

attn_status attn_compare_fits(const attn_hist* hist, uint64_t x_min, double* out_llr) {
  if (attn_status s = require(hist && out_llr, "attn_compare_fits: null argument")) return s;
  return guarded([&] { *out_llr = attnloop::compare_geometric_vs_powerlaw(hist->v, x_min); });
}

attn_status attn_popularity_threshold(const attn_log* log, double q, double* out) {
  if (attn_status s = require(log && out, "attn_popularity_threshold: null argument")) return s;
  return guarded([&] {
    std::vector<double> attentions;
    attentions.reserve(log->v.records.size());
    for (const auto& r : log->v.records) attentions.push_back(r.x);
    *out = attnloop::popularity_threshold(std::move(attentions), q);
  });
}

attn_status attn_reverse_index_ratio(const attn_log* log, uint32_t K, double threshold,
                                     double inactivity_cutoff_seconds, attn_series** out) {
  if (attn_status s = require(log && out, "attn_reverse_index_ratio: null argument")) return s;
  return guarded([&] {
    auto ratios =
        attnloop::reverse_index_ratio(log->v, K, threshold, inactivity_cutoff_seconds);
    *out = new attn_series{
        attnloop::series_from_ratio("reverse_index_ratio", "index", ratios)};
  });
}

attn_status attn_weekly_final_ratio(const attn_log* log, double threshold,
                                    double finality_lag_seconds, attn_series** out_all,
                                    attn_series** out_final, double* out_t_stat,
                                    double* out_p_value) {
  if (attn_status s = require(log && out_all && out_final && out_t_stat && out_p_value,
                              "attn_weekly_final_ratio: null argument")) {
    return s;
  }
  return guarded([&] {
    const auto weekly = attnloop::weekly_final_ratio(log->v, threshold, finality_lag_seconds);
    const auto test =
        attnloop::paired_t_test_less(weekly.final_only.values, weekly.all.values);
    *out_all = new attn_series{attnloop::series_from_ratio("weekly_all", "week", weekly.all)};
    *out_final =
        new attn_series{attnloop::series_from_ratio("weekly_final", "week", weekly.final_only)};
    *out_t_stat = test.t_stat;
    *out_p_value = test.p_value;
  });
}

attn_status attn_paired_t_test_less(const double* x, const double* y, size_t len,
                                    double* out_t_stat, double* out_p_value) {
  if (attn_status s = require(x && y && out_t_stat && out_p_value,
                              "attn_paired_t_test_less: null argument")) {
    return s;
  }
  return guarded([&] {
    const auto result = attnloop::paired_t_test_less({x, len}, {y, len});
    *out_t_stat = result.t_stat;
    *out_p_value = result.p_value;
  });
}

attn_status attn_fan_bins(const attn_log* log, const attn_snapshot* snap, int64_t window_start,
                          int64_t window_end, const char* exclude_users_path,
                          attn_series** out_fans_vs_productivity,
                          attn_series** out_attention_vs_fans) {
  if (attn_status s = require(log && snap && out_fans_vs_productivity && out_attention_vs_fans,
                              "attn_fan_bins: null argument")) {
    return s;
  }
  return guarded([&] {
    std::unordered_set<std::string> exclude;
    if (exclude_users_path != nullptr) exclude = attnloop::read_user_list(exclude_users_path);
    const attnloop::CohortWindow window{window_start, window_end};
    const auto rows = attnloop::fan_attention_join(
        log->v, snap->v, window, exclude_users_path ? &exclude : nullptr);
    if (rows.empty()) {
      throw attnloop::InsufficientDataError(
          "fan_attention_join: no users with in-window submissions");
    }
    std::vector<std::pair<double, double>> prod_fans;
    std::vector<std::pair<double, double>> fans_attention;
    prod_fans.reserve(rows.size());
    for (const auto& row : rows) {
      prod_fans.emplace_back(static_cast<double>(row.past_productivity),
                             static_cast<double>(row.fans));
      for (const double x : row.attentions) {
        fans_attention.emplace_back(static_cast<double>(row.fans), x);
      }
    }
    const auto by_prod = attnloop::binned_mean(prod_fans, attnloop::BinScheme::kPow2);
    const auto by_fans = attnloop::binned_mean(fans_attention, attnloop::BinScheme::kPow2);
    *out_fans_vs_productivity =
        new attn_series{attnloop::series_from_binned("fans_vs_productivity", by_prod, "mean_fans")};
    *out_attention_vs_fans = new attn_series{
        attnloop::series_from_binned("attention_vs_fans", by_fans, "mean_attention")};
  });
}

attn_status attn_linear_fit(const double* x, const double* y, size_t len, double* out_slope,
                            double* out_intercept, double* out_r2) {
  if (attn_status s = require(x && y && out_slope && out_intercept && out_r2,
                              "attn_linear_fit: null argument")) {
    return s;
  }
  return guarded([&] {
    const auto fit = attnloop::linear_fit({x, len}, {y, len});
    *out_slope = fit.slope;
    *out_intercept = fit.intercept;
    *out_r2 = fit.r2;
  });
}

attn_status attn_series_len(const attn_series* series, size_t* out) {
  if (attn_status s = require(series && out, "attn_series_len: null argument")) return s;
  *out = series->v.values.size();
  return ATTN_OK;
}

const char* attn_series_name(const attn_series* series) {
  return series == nullptr ? "" : series->v.name.c_str();
}

const char* attn_series_label(const attn_series* series, size_t i) {
  if (series == nullptr || i >= series->v.labels.size()) return nullptr;
  return series->v.labels[i].c_str();
}

attn_status attn_series_value(const attn_series* series, size_t i, double* out) {
  if (attn_status s = require(series && out, "attn_series_value: null argument")) return s;
  if (attn_status s = require(i < series->v.values.size(), "attn_series_value: out of range")) {
    return s;
  }
  *out = series->v.values[i];
  return ATTN_OK;
}

attn_status attn_series_count(const attn_series* series, size_t i, uint64_t* out) {
  if (attn_status s = require(series && out, "attn_series_count: null argument")) return s;
  if (attn_status s = require(i < series->v.counts.size(), "attn_series_count: out of range")) {
    return s;
  }
  *out = series->v.counts[i];
  return ATTN_OK;
}

attn_status attn_series_extra(const attn_series* series, const char* column, size_t i,
                              double* out) {
  if (attn_status s = require(series && column && out, "attn_series_extra: null argument")) {
    return s;
  }
  for (const auto& extra : series->v.extras) {
    if (extra.header == column) {
      if (attn_status s = require(i < extra.values.size(), "attn_series_extra: out of range")) {
        return s;
      }
      *out = extra.values[i];
      return ATTN_OK;
    }
  }
  return fail(ATTN_E_USAGE, "attn_series_extra: no such column");
}

attn_status attn_series_write_csv(const attn_series* series, const char* path) {
  if (attn_status s = require(series && path, "attn_series_write_csv: null argument")) return s;
  return guarded([&] { attnloop::write_series_csv(series->v, path); });
}

void attn_series_free(attn_series* series) { delete series; }

attn_status attn_report_new(const char* analysis, attn_report** out) {
  if (attn_status s = require(analysis && out, "attn_report_new: null argument")) return s;
  return guarded([&] { *out = new attn_report{attnloop::Report(analysis)}; });
}

attn_status attn_report_add_option_text(attn_report* report, const char* name,
                                        const char* value) {
  if (attn_status s = require(report && name && value, "attn_report_add_option_text: null")) {
    return s;
  }
  return guarded([&] { report->v.add_option(name, std::string(value)); });
}

attn_status attn_report_add_option_num(attn_report* report, const char* name, double value) {
  if (attn_status s = require(report && name, "attn_report_add_option_num: null argument")) {
    return s;
  }
  return guarded([&] { report->v.add_option(name, value); });
}

attn_status attn_report_add_scalar(attn_report* report, const char* name, double value) {
  if (attn_status s = require(report && name, "attn_report_add_scalar: null argument")) return s;
  return guarded([&] { report->v.add_scalar(name, value); });
}

attn_status attn_report_add_text(attn_report* report, const char* name, const char* value) {
  if (attn_status s = require(report && name && value, "attn_report_add_text: null argument")) {
    return s;
  }
  return guarded([&] { report->v.add_text(name, value); });
}

attn_status attn_report_add_series(attn_report* report, const attn_series* series) {
  if (attn_status s = require(report && series, "attn_report_add_series: null argument")) {
    return s;
  }
  return guarded([&] { report->v.add_series(series->v); });
}

attn_status attn_report_write_json(const attn_report* report, const char* path) {
  if (attn_status s = require(report && path, "attn_report_write_json: null argument")) return s;
  return guarded([&] { report->v.write_json(path); });
}

void attn_report_free(attn_report* report) { delete report; }

attn_status attn_manifest_write(const char* path, const char* subcommand,
                                const char* config_digest_hex, uint64_t master_seed,
                                int64_t n_cap_used) {
  if (attn_status s = require(path && subcommand && config_digest_hex,
                              "attn_manifest_write: null argument")) {
    return s;
  }
  return guarded([&] {
    attnloop::RunManifest m;
    m.subcommand = subcommand;
    m.config_digest = config_digest_hex;
    m.master_seed = master_seed;
    m.n_cap_used = n_cap_used;
    attnloop::write_manifest(m, path);
  });
}

}  // extern "C"
