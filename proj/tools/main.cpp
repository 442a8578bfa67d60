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
//
// attnloop command line: simulate contributor populations, analyze event
// logs, fit lifetime distributions. Talks to the library exclusively through
// the C API in attnloop/attnloop.h.
//
// Exit codes: 0 success, 2 configuration error, 3 I/O error,
// 4 insufficient data.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "attnloop/attnloop.h"

namespace {

constexpr double kMonthSeconds = 30.0 * 86400.0;  // fixed 30-day months
constexpr std::int64_t kDefaultStartTime = 1167609600;  // 2007-01-01 (Monday, UTC)
constexpr std::int64_t kFourYears = 126230400;

int exit_code_of(attn_status status) {
  switch (status) {
    case ATTN_OK: return 0;
    case ATTN_E_CONFIG: return 2;
    case ATTN_E_IO: return 3;
    case ATTN_E_INSUFFICIENT_DATA: return 4;
    case ATTN_E_DEGENERATE: return 4;
    case ATTN_E_USAGE: return 2;
  }
  return 2;
}

// Fails the whole command on the first non-OK status.
struct CommandError {
  int code;
};

void check(attn_status status) {
  if (status != ATTN_OK) {
    std::fprintf(stderr, "attnloop: %s: %s\n", attn_status_name(status), attn_last_error());
    throw CommandError{exit_code_of(status)};
  }
}

template <typename T, void (*Free)(T*)>
struct HandleDeleter {
  void operator()(T* p) const { Free(p); }
};
using ParamsPtr = std::unique_ptr<attn_params, HandleDeleter<attn_params, attn_params_free>>;
using LogPtr = std::unique_ptr<attn_log, HandleDeleter<attn_log, attn_log_free>>;
using SnapshotPtr =
    std::unique_ptr<attn_snapshot, HandleDeleter<attn_snapshot, attn_snapshot_free>>;
using HistPtr = std::unique_ptr<attn_hist, HandleDeleter<attn_hist, attn_hist_free>>;
using SeriesPtr = std::unique_ptr<attn_series, HandleDeleter<attn_series, attn_series_free>>;
using ReportPtr = std::unique_ptr<attn_report, HandleDeleter<attn_report, attn_report_free>>;

std::string out_file(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    std::fprintf(stderr, "attnloop: io error: cannot create output directory %s\n", dir.c_str());
    throw CommandError{3};
  }
}

attn_format parse_format(const std::string& name) {
  if (name == "csv") return ATTN_FORMAT_CSV;
  if (name == "jsonl") return ATTN_FORMAT_JSONL;
  return ATTN_FORMAT_AUTO;
}

struct SimulateArgs {
  std::string config_path;
  std::string out_dir;
  std::uint64_t users = 1000;
  std::uint64_t seed = 1;
  std::int64_t start_time = kDefaultStartTime;
  std::int64_t capture_time = -1;  // default: start + 4 years
  double arrival_spread_seconds = 0.0;
  std::int64_t snapshot_time = -1;
  int threads = 0;
  std::string format = "jsonl";
};

int cmd_simulate(const SimulateArgs& args) {
  ParamsPtr params;
  {
    attn_params* raw = nullptr;
    check(attn_params_load(args.config_path.c_str(), &raw));
    params.reset(raw);
  }
  ensure_out_dir(args.out_dir);

  attn_sim_options options;
  attn_sim_options_init(&options);
  options.n_users = args.users;
  options.master_seed = args.seed;
  options.start_time = args.start_time;
  options.capture_time =
      args.capture_time >= 0 ? args.capture_time : args.start_time + kFourYears;
  options.arrival_spread_seconds = args.arrival_spread_seconds;
  options.snapshot_time = args.snapshot_time;
  options.threads = args.threads;

  LogPtr log;
  SnapshotPtr snapshot;
  {
    attn_log* raw_log = nullptr;
    attn_snapshot* raw_snap = nullptr;
    check(attn_simulate(params.get(), &options, &raw_log, &raw_snap));
    log.reset(raw_log);
    snapshot.reset(raw_snap);
  }

  const std::string log_name = args.format == "csv" ? "events.csv" : "events.jsonl";
  const std::string log_path = out_file(args.out_dir, log_name);
  check(attn_log_write(log.get(), log_path.c_str(), parse_format(args.format)));
  if (snapshot) {
    check(attn_snapshot_write(snapshot.get(), out_file(args.out_dir, "fan_snapshot.csv").c_str()));
  }

  char config_digest[65];
  check(attn_sha256_file(args.config_path.c_str(), config_digest));
  std::uint64_t n_cap = 0;
  check(attn_params_n_cap(params.get(), &n_cap));
  check(attn_manifest_write(out_file(args.out_dir, "manifest.json").c_str(), "simulate",
                            config_digest, args.seed, static_cast<std::int64_t>(n_cap)));

  std::uint64_t records = 0;
  check(attn_log_record_count(log.get(), &records));
  char log_digest[65];
  check(attn_log_digest(log.get(), log_digest));
  std::printf("simulate: %" PRIu64 " users, %" PRIu64 " records -> %s (sha256 %.12s...)\n",
              args.users, records, log_path.c_str(), log_digest);
  return 0;
}

struct AnalyzeArgs {
  std::string log_path;
  std::string analysis;
  std::string out_dir;
  double q = 0.9;
  unsigned K = 5;
  double T_months = 3.0;
  std::int64_t capture_override = -1;
  std::int64_t window_start = -1;
  std::int64_t window_end = -1;
  std::string snapshot_path;
  std::string exclude_users_path;
};

void write_manifest_for_input(const std::string& out_dir, const std::string& subcommand,
                              const std::string& input_path) {
  char digest[65];
  check(attn_sha256_file(input_path.c_str(), digest));
  check(attn_manifest_write(out_file(out_dir, "manifest.json").c_str(), subcommand.c_str(),
                            digest, 0, 0));
}

double popularity_threshold_or_die(const attn_log* log, double q) {
  double threshold = 0.0;
  check(attn_popularity_threshold(log, q, &threshold));
  return threshold;
}

int cmd_analyze(const AnalyzeArgs& args) {
  LogPtr log;
  {
    attn_log* raw = nullptr;
    check(attn_log_read(args.log_path.c_str(), ATTN_FORMAT_AUTO, args.capture_override, &raw));
    log.reset(raw);
  }
  ensure_out_dir(args.out_dir);
  const double cutoff_seconds = args.T_months * kMonthSeconds;

  ReportPtr report;
  {
    attn_report* raw = nullptr;
    check(attn_report_new(args.analysis.c_str(), &raw));
    report.reset(raw);
  }
  check(attn_report_add_option_text(report.get(), "log", args.log_path.c_str()));
  check(attn_report_add_option_num(report.get(), "T_months", args.T_months));

  if (args.analysis == "dist") {
    HistPtr hist;
    {
      attn_hist* raw = nullptr;
      check(attn_histogram(log.get(), cutoff_seconds, &raw));
      hist.reset(raw);
    }
    std::uint64_t total = 0, excluded = 0;
    check(attn_hist_total_users(hist.get(), &total));
    check(attn_hist_excluded_users(hist.get(), &excluded));
    if (total == 0) {
      std::fprintf(stderr, "attnloop: insufficient data: every user is still active "
                           "within the cutoff window\n");
      return 4;
    }
    SeriesPtr series;
    {
      attn_series* raw = nullptr;
      check(attn_hist_series(hist.get(), &raw));
      series.reset(raw);
    }
    check(attn_series_write_csv(series.get(), out_file(args.out_dir, "distribution.csv").c_str()));
    check(attn_report_add_series(report.get(), series.get()));
    check(attn_report_add_scalar(report.get(), "total_users", static_cast<double>(total)));
    check(attn_report_add_scalar(report.get(), "excluded_users", static_cast<double>(excluded)));
    std::printf("dist: %" PRIu64 " stopped users (%" PRIu64 " still active excluded)\n", total,
                excluded);
  } else if (args.analysis == "hazard") {
    HistPtr hist;
    {
      attn_hist* raw = nullptr;
      check(attn_histogram(log.get(), cutoff_seconds, &raw));
      hist.reset(raw);
    }
    std::uint64_t total = 0;
    check(attn_hist_total_users(hist.get(), &total));
    if (total == 0) {
      std::fprintf(stderr, "attnloop: insufficient data: every user is still active "
                           "within the cutoff window\n");
      return 4;
    }
    SeriesPtr series;
    {
      attn_series* raw = nullptr;
      check(attn_hazard(hist.get(), &raw));
      series.reset(raw);
    }
    check(attn_series_write_csv(series.get(), out_file(args.out_dir, "hazard.csv").c_str()));
    check(attn_report_add_series(report.get(), series.get()));
    std::size_t len = 0;
    check(attn_series_len(series.get(), &len));
    std::printf("hazard: %zu support points over %" PRIu64 " stopped users\n", len, total);
  } else if (args.analysis == "reverse_index") {
    const double threshold = popularity_threshold_or_die(log.get(), args.q);
    SeriesPtr series;
    {
      attn_series* raw = nullptr;
      check(attn_reverse_index_ratio(log.get(), args.K, threshold, cutoff_seconds, &raw));
      series.reset(raw);
    }
    std::size_t len = 0;
    check(attn_series_len(series.get(), &len));
    if (len == 0) {
      std::fprintf(stderr, "attnloop: insufficient data: no stopped user has >= %u submissions\n",
                   args.K);
      return 4;
    }
    check(attn_series_write_csv(series.get(),
                                out_file(args.out_dir, "reverse_index.csv").c_str()));
    check(attn_report_add_series(report.get(), series.get()));
    check(attn_report_add_scalar(report.get(), "popularity_threshold", threshold));
    double first = 0.0, last = 0.0;
    std::uint64_t qualifying = 0;
    check(attn_series_value(series.get(), 0, &first));
    check(attn_series_value(series.get(), len - 1, &last));
    check(attn_series_count(series.get(), 0, &qualifying));
    std::printf("reverse_index: %" PRIu64 " qualifying users, ratio(-%u)=%.6f ratio(-1)=%.6f "
                "(threshold %.6g)\n",
                qualifying, args.K, first, last, threshold);
  } else if (args.analysis == "weekly_final") {
    const double threshold = popularity_threshold_or_die(log.get(), args.q);
    SeriesPtr all, final_only;
    double t_stat = 0.0, p_value = 0.0;
    {
      attn_series* raw_all = nullptr;
      attn_series* raw_final = nullptr;
      check(attn_weekly_final_ratio(log.get(), threshold, args.T_months * kMonthSeconds,
                                    &raw_all, &raw_final, &t_stat, &p_value));
      all.reset(raw_all);
      final_only.reset(raw_final);
    }
    check(attn_series_write_csv(all.get(), out_file(args.out_dir, "weekly_all.csv").c_str()));
    check(attn_series_write_csv(final_only.get(),
                                out_file(args.out_dir, "weekly_final.csv").c_str()));
    check(attn_report_add_series(report.get(), all.get()));
    check(attn_report_add_series(report.get(), final_only.get()));
    check(attn_report_add_scalar(report.get(), "popularity_threshold", threshold));
    check(attn_report_add_scalar(report.get(), "t_stat", t_stat));
    check(attn_report_add_scalar(report.get(), "p_value_one_sided", p_value));
    std::size_t weeks = 0;
    check(attn_series_len(all.get(), &weeks));
    std::printf("weekly_final: %zu paired weeks, paired t-test (r_f < r): t=%.4f, "
                "one-sided p=%.6g\n",
                weeks, t_stat, p_value);
  } else if (args.analysis == "fan_bins") {
    if (args.snapshot_path.empty() || args.window_start < 0 || args.window_end < 0) {
      std::fprintf(stderr, "attnloop: config error: fan_bins needs --snapshot, --window-start "
                           "and --window-end\n");
      return 2;
    }
    SnapshotPtr snapshot;
    {
      attn_snapshot* raw = nullptr;
      check(attn_snapshot_read(args.snapshot_path.c_str(), &raw));
      snapshot.reset(raw);
    }
    SeriesPtr fans_by_prod, attention_by_fans;
    {
      attn_series* raw_a = nullptr;
      attn_series* raw_b = nullptr;
      check(attn_fan_bins(log.get(), snapshot.get(), args.window_start, args.window_end,
                          args.exclude_users_path.empty() ? nullptr
                                                          : args.exclude_users_path.c_str(),
                          &raw_a, &raw_b));
      fans_by_prod.reset(raw_a);
      attention_by_fans.reset(raw_b);
    }
    check(attn_series_write_csv(fans_by_prod.get(),
                                out_file(args.out_dir, "fans_vs_productivity.csv").c_str()));
    check(attn_series_write_csv(attention_by_fans.get(),
                                out_file(args.out_dir, "attention_vs_fans.csv").c_str()));
    check(attn_report_add_series(report.get(), fans_by_prod.get()));
    check(attn_report_add_series(report.get(), attention_by_fans.get()));
    // Slopes of the two binned relationships (mean_key vs mean).
    auto binned_slope = [](const attn_series* series, double* slope, double* r2) {
      std::size_t len = 0;
      check(attn_series_len(series, &len));
      std::vector<double> xs(len), ys(len);
      for (std::size_t i = 0; i < len; ++i) {
        check(attn_series_extra(series, "mean_key", i, &xs[i]));
        check(attn_series_value(series, i, &ys[i]));
      }
      double intercept = 0.0;
      check(attn_linear_fit(xs.data(), ys.data(), len, slope, &intercept, r2));
    };
    double slope_a = 0.0, r2_a = 0.0, slope_b = 0.0, r2_b = 0.0;
    binned_slope(fans_by_prod.get(), &slope_a, &r2_a);
    binned_slope(attention_by_fans.get(), &slope_b, &r2_b);
    check(attn_report_add_scalar(report.get(), "fans_vs_productivity_slope", slope_a));
    check(attn_report_add_scalar(report.get(), "fans_vs_productivity_r2", r2_a));
    check(attn_report_add_scalar(report.get(), "attention_vs_fans_slope", slope_b));
    check(attn_report_add_scalar(report.get(), "attention_vs_fans_r2", r2_b));
    std::printf("fan_bins: fans~productivity slope=%.4f (R2=%.4f), attention~fans slope=%.4f "
                "(R2=%.4f)\n",
                slope_a, r2_a, slope_b, r2_b);
  } else {
    std::fprintf(stderr, "attnloop: config error: unknown analysis '%s'\n",
                 args.analysis.c_str());
    return 2;
  }

  check(attn_report_write_json(report.get(), out_file(args.out_dir, "report.json").c_str()));
  write_manifest_for_input(args.out_dir, "analyze", args.log_path);
  return 0;
}

struct FitArgs {
  std::string log_path;
  std::string model = "both";
  std::uint64_t x_min = 10;
  double T_months = 3.0;
  std::string out_dir;
  std::int64_t capture_override = -1;
};

int cmd_fit(const FitArgs& args) {
  LogPtr log;
  {
    attn_log* raw = nullptr;
    check(attn_log_read(args.log_path.c_str(), ATTN_FORMAT_AUTO, args.capture_override, &raw));
    log.reset(raw);
  }
  ensure_out_dir(args.out_dir);
  HistPtr hist;
  {
    attn_hist* raw = nullptr;
    check(attn_histogram(log.get(), args.T_months * kMonthSeconds, &raw));
    hist.reset(raw);
  }
  std::uint64_t total = 0;
  check(attn_hist_total_users(hist.get(), &total));
  if (total == 0) {
    std::fprintf(stderr, "attnloop: insufficient data: every user is still active within the "
                         "cutoff window\n");
    return 4;
  }

  ReportPtr report;
  {
    attn_report* raw = nullptr;
    check(attn_report_new("fit", &raw));
    report.reset(raw);
  }
  check(attn_report_add_option_text(report.get(), "log", args.log_path.c_str()));
  check(attn_report_add_option_text(report.get(), "model", args.model.c_str()));
  check(attn_report_add_option_num(report.get(), "x_min", static_cast<double>(args.x_min)));
  check(attn_report_add_option_num(report.get(), "T_months", args.T_months));
  check(attn_report_add_scalar(report.get(), "total_users", static_cast<double>(total)));

  const bool want_geometric = args.model == "geometric" || args.model == "both";
  const bool want_powerlaw = args.model == "powerlaw" || args.model == "both";

  if (want_geometric) {
    double p_hat = 0.0;
    check(attn_fit_geometric(hist.get(), &p_hat));
    check(attn_report_add_scalar(report.get(), "geometric_p_hat", p_hat));
    std::printf("fit geometric: p_hat=%.6f (per-step stop probability)\n", p_hat);
  }
  if (want_powerlaw) {
    attn_powerlaw_fit fit;
    check(attn_fit_powerlaw(hist.get(), args.x_min, &fit));
    check(attn_report_add_scalar(report.get(), "powerlaw_alpha_hat", fit.alpha_hat));
    check(attn_report_add_scalar(report.get(), "powerlaw_n_tail",
                                 static_cast<double>(fit.n_tail)));
    check(attn_report_add_scalar(report.get(), "powerlaw_log_likelihood", fit.log_likelihood));
    std::printf("fit powerlaw: alpha_hat=%.4f (x_min=%" PRIu64 ", tail points=%" PRIu64 ")\n",
                fit.alpha_hat, fit.x_min, fit.n_tail);
  }
  if (want_geometric && want_powerlaw) {
    double llr = 0.0;
    check(attn_compare_fits(hist.get(), args.x_min, &llr));
    check(attn_report_add_scalar(report.get(), "loglik_ratio_per_tail_point", llr));
    const char* verdict = llr > 0.01    ? "the tail favors a power law"
                          : llr < -0.01 ? "the tail favors a geometric lifetime"
                                        : "neither model is clearly favored";
    check(attn_report_add_text(report.get(), "verdict", verdict));
    std::printf("fit verdict: log-likelihood ratio %+.4f per tail point -> %s\n", llr, verdict);
  }

  check(attn_report_write_json(report.get(), out_file(args.out_dir, "report.json").c_str()));
  write_manifest_for_input(args.out_dir, "fit", args.log_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"attnloop: seeded simulator and estimator suite for attention-feedback "
               "contributor populations"};
  app.require_subcommand(1);
  app.set_version_flag("--version", attn_version());

  SimulateArgs sim;
  CLI::App* simulate = app.add_subcommand("simulate", "simulate a contributor population");
  simulate->add_option("--config", sim.config_path, "model config file")->required();
  simulate->add_option("--out", sim.out_dir, "output directory")->required();
  simulate->add_option("--users", sim.users, "number of contributors");
  simulate->add_option("--seed", sim.seed, "master seed");
  simulate->add_option("--start-time", sim.start_time, "population start (epoch seconds)");
  simulate->add_option("--capture-time", sim.capture_time,
                       "data capture instant (default start + 4 years)");
  simulate->add_option("--arrival-spread-seconds", sim.arrival_spread_seconds,
                       "stagger user arrivals uniformly over this many seconds");
  simulate->add_option("--snapshot-time", sim.snapshot_time,
                       "also write a fan snapshot taken at this instant");
  simulate->add_option("--threads", sim.threads, "worker threads (0 = auto)");
  simulate->add_option("--format", sim.format, "event log format: jsonl or csv")
      ->check(CLI::IsMember({"jsonl", "csv"}));

  AnalyzeArgs an;
  CLI::App* analyze = app.add_subcommand("analyze", "run an analysis over an event log");
  analyze->add_option("log", an.log_path, "event log file")->required();
  analyze->add_option("--analysis", an.analysis,
                      "dist, hazard, reverse_index, weekly_final or fan_bins")
      ->required()
      ->check(CLI::IsMember({"dist", "hazard", "reverse_index", "weekly_final", "fan_bins"}));
  analyze->add_option("--out", an.out_dir, "output directory")->required();
  analyze->add_option("--q", an.q, "popularity quantile (default 0.9)");
  analyze->add_option("--K", an.K, "reverse indices to report (default 5)");
  analyze->add_option("--T-months", an.T_months,
                      "inactivity cutoff / finality lag in 30-day months (default 3)");
  analyze->add_option("--capture-time", an.capture_override,
                      "override the log's capture_time header");
  analyze->add_option("--window-start", an.window_start, "cohort window start (fan_bins)");
  analyze->add_option("--window-end", an.window_end, "cohort window end, exclusive (fan_bins)");
  analyze->add_option("--snapshot", an.snapshot_path, "fan snapshot CSV (fan_bins)");
  analyze->add_option("--exclude-users", an.exclude_users_path,
                      "file of user ids to exclude from fan_bins");

  FitArgs fit;
  CLI::App* fit_cmd = app.add_subcommand("fit", "fit lifetime distributions to an event log");
  fit_cmd->add_option("log", fit.log_path, "event log file")->required();
  fit_cmd->add_option("--model", fit.model, "geometric, powerlaw or both")
      ->check(CLI::IsMember({"geometric", "powerlaw", "both"}));
  fit_cmd->add_option("--x-min", fit.x_min, "power-law tail start (default 10)");
  fit_cmd->add_option("--T-months", fit.T_months, "inactivity cutoff in 30-day months");
  fit_cmd->add_option("--out", fit.out_dir, "output directory")->required();
  fit_cmd->add_option("--capture-time", fit.capture_override,
                      "override the log's capture_time header");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(sim);
    if (analyze->parsed()) return cmd_analyze(an);
    if (fit_cmd->parsed()) return cmd_fit(fit);
  } catch (const CommandError& e) {
    return e.code;
  }
  return 2;
}
