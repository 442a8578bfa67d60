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

#include "attnloop/estimators.hpp"

#include <cmath>
#include <random>

#include <doctest.h>

#include "attnloop/errors.hpp"
#include "attnloop/simulate.hpp"
#include "attnloop/stats.hpp"
#include "oracles.hpp"

using namespace attnloop;

namespace {

ContributionHistogram hist_of(std::initializer_list<std::pair<std::uint64_t, std::uint64_t>> kv) {
  ContributionHistogram hist;
  for (const auto& [n, c] : kv) {
    hist.counts[n] = c;
    hist.total_users += c;
  }
  return hist;
}

EventLog log_of(std::vector<EventRecord> records, std::int64_t capture) {
  EventLog log;
  log.records = std::move(records);
  log.capture_time = capture;
  return log;
}

ModelParams iid_exp() {
  ModelParams p;
  p.variant = ModelVariant::kIid;
  p.noise = NoiseKernel::exponential();
  return p;
}

ModelParams reinforced_exp(std::uint64_t n_cap = 100000) {
  ModelParams p;
  p.variant = ModelVariant::kReinforced;
  p.noise = NoiseKernel::exponential();
  p.n_cap = n_cap;
  return p;
}

constexpr double kDay = 86400.0;
constexpr double kCutoff90d = 90.0 * kDay;

}  // namespace

TEST_CASE("contribution histogram counts stopped users and flags active ones") {
  // One user, 3 records, last one old: counted as {3: 1}.
  const auto log = log_of({{"u1", "i1", 100, 1.0}, {"u1", "i2", 200, 1.0}, {"u1", "i3", 300, 1.0}},
                          300 + 8000000);
  const auto hist = contribution_histogram(log, kCutoff90d);
  CHECK(hist.total_users == 1);
  CHECK(hist.excluded_users == 0);
  CHECK(hist.count_at(3) == 1);

  // Last record inside the cutoff window: excluded, empty histogram.
  const auto active = log_of({{"u1", "i1", 100, 1.0}}, 200);
  const auto hist2 = contribution_histogram(active, kCutoff90d);
  CHECK(hist2.total_users == 0);
  CHECK(hist2.excluded_users == 1);
  CHECK(hist2.counts.empty());

  CHECK_THROWS_AS((void)contribution_histogram(log_of({}, 10), kCutoff90d),
                  InsufficientDataError);
}

TEST_CASE("excluded fraction matches a Monte Carlo oracle of the lifetime span") {
  // Iid exponential noise, a = theta = 1: every submission stops with
  // probability 1 - 1/e. A user is excluded when their last record falls
  // inside the cutoff window before capture.
  ModelParams p = iid_exp();
  p.gap_mean_seconds = kDay;
  SimOptions options;
  options.n_users = 40000;
  options.master_seed = 1001;
  options.start_time = 0;
  options.capture_time = static_cast<std::int64_t>(120 * kDay);
  const double cutoff = kCutoff90d;
  const auto result = simulate_population(p, options);
  const auto hist = contribution_histogram(result.log, cutoff);
  const double excluded_frac =
      static_cast<double>(hist.excluded_users) / static_cast<double>(options.n_users);

  std::mt19937_64 rng(777);
  const double boundary = static_cast<double>(options.capture_time) - cutoff;
  int excluded = 0;
  const int trials = 200000;
  for (int i = 0; i < trials; ++i) {
    const auto span = oracles::lifetime_with_span(oracles::OracleModel::kIid,
                                                  oracles::OracleNoise::kExponential, 1.0, 1.0,
                                                  kDay, p.n_cap, rng);
    if (static_cast<double>(span.last_offset_seconds) > boundary) ++excluded;
  }
  const double oracle_frac = static_cast<double>(excluded) / trials;
  const double se = std::sqrt(oracle_frac * (1 - oracle_frac) *
                              (1.0 / options.n_users + 1.0 / trials));
  CHECK(std::fabs(excluded_frac - oracle_frac) < 4.0 * se + 1e-9);
}

TEST_CASE("hazard: exact arithmetic on a known histogram") {
  const auto curve = hazard(hist_of({{1, 50}, {2, 25}, {3, 25}}));
  REQUIRE(curve.n.size() == 3);
  CHECK(curve.h[0] == 0.5);
  CHECK(curve.h[1] == 0.5);
  CHECK(curve.h[2] == 1.0);
  CHECK(curve.at_risk[0] == 100);
  CHECK(curve.at_risk[1] == 50);
  CHECK(curve.at_risk[2] == 25);
}

TEST_CASE("hazard is flat for geometric data within 5 standard errors") {
  const ModelParams p = iid_exp();
  const std::uint64_t users = 200000;
  ContributionHistogram hist;
  hist.counts = simulate_final_counts(p, users, 321, 0);
  for (const auto& [n, c] : hist.counts) hist.total_users += c;
  const double p_stop = 1.0 - std::exp(-1.0);
  const auto curve = hazard(hist);
  for (std::size_t i = 0; i < curve.n.size(); ++i) {
    if (curve.n[i] > 10) break;
    const double se =
        std::sqrt(p_stop * (1.0 - p_stop) / static_cast<double>(curve.at_risk[i]));
    CHECK(std::fabs(curve.h[i] - p_stop) < 5.0 * se);
  }
  // The largest observed count always has hazard exactly one.
  CHECK(curve.h.back() == 1.0);
}

TEST_CASE("survival reconstruction reproduces the empirical CCDF exactly") {
  RngStream seed_rng(1, 1);
  for (int rep = 0; rep < 50; ++rep) {
    ContributionHistogram hist;
    const int support = 1 + static_cast<int>(seed_rng.next_u64() % 40);
    for (int k = 0; k < support; ++k) {
      const auto n = 1 + seed_rng.next_u64() % 200;
      const auto c = 1 + seed_rng.next_u64() % 1000;
      hist.counts[n] += c;
    }
    for (const auto& [n, c] : hist.counts) hist.total_users += c;
    const auto curve = hazard(hist);

    double survival = 1.0;  // G(n_i) = prod_{m < n_i} (1 - h(m))
    for (std::size_t i = 0; i < curve.n.size(); ++i) {
      const double ccdf =
          static_cast<double>(curve.at_risk[i]) / static_cast<double>(hist.total_users);
      CHECK(survival == doctest::Approx(ccdf).epsilon(1e-12));
      survival *= 1.0 - curve.h[i];
    }
  }
}

TEST_CASE("geometric MLE: closed forms and the simulated stop probability") {
  CHECK(fit_geometric(hist_of({{1, 1000}})) == 1.0);
  CHECK(fit_geometric(hist_of({{1, 2}, {2, 1}})) == 0.75);  // 3 / (2 + 2)

  const auto counts = simulate_final_counts(iid_exp(), 1000000, 2024, 0);
  ContributionHistogram hist;
  hist.counts = counts;
  for (const auto& [n, c] : counts) hist.total_users += c;
  CHECK(std::fabs(fit_geometric(hist) - (1.0 - std::exp(-1.0))) < 0.002);
}

TEST_CASE("power-law MLE: closed form, synthetic recovery, and the tail guard") {
  // Three copies of n=2 at x_min=2: alpha = 1 + 1/ln(2/1.5).
  const auto fit = fit_powerlaw(hist_of({{2, 3}}), 2);
  CHECK(fit.n_tail == 3);
  CHECK(std::fabs(fit.alpha_hat - (1.0 + 1.0 / std::log(2.0 / 1.5))) < 1e-10);

  CHECK_THROWS_AS((void)fit_powerlaw(hist_of({{2, 3}}), 3), InsufficientDataError);
  CHECK_THROWS_AS((void)fit_powerlaw(hist_of({{12, 9}}), 12), InsufficientDataError);

  // Exact inverse-CDF power-law sample at alpha = 2.5.
  const oracles::DiscretePowerLawSampler sampler(2.5, 10);
  std::mt19937_64 rng(5150);
  ContributionHistogram hist;
  const int n_draws = 1000000;
  for (int i = 0; i < n_draws; ++i) ++hist.counts[sampler.sample(rng)];
  hist.total_users = n_draws;
  const auto synth = fit_powerlaw(hist, 10);
  CHECK(std::fabs(synth.alpha_hat - 2.5) < 0.05);
}

TEST_CASE("power-law MLE is calibrated: 95% CI coverage over 100 repetitions") {
  const double alpha = 2.2;
  const oracles::DiscretePowerLawSampler sampler(alpha, 5);
  std::mt19937_64 rng(31337);
  int covered = 0;
  for (int rep = 0; rep < 100; ++rep) {
    ContributionHistogram hist;
    const int n_draws = 20000;
    for (int i = 0; i < n_draws; ++i) ++hist.counts[sampler.sample(rng)];
    hist.total_users = n_draws;
    const auto fit = fit_powerlaw(hist, 5);
    const double se = (fit.alpha_hat - 1.0) / std::sqrt(static_cast<double>(fit.n_tail));
    if (std::fabs(fit.alpha_hat - alpha) <= 1.96 * se) ++covered;
  }
  CHECK(covered >= 90);
}

TEST_CASE("model comparison favors the generating model") {
  // Geometric data: power law loses.
  ContributionHistogram geom;
  geom.counts = simulate_final_counts(iid_exp(), 100000, 6, 0);
  for (const auto& [n, c] : geom.counts) geom.total_users += c;
  CHECK(compare_geometric_vs_powerlaw(geom, 2) < 0.0);

  // Reinforced data: power law wins.
  ContributionHistogram reinforced;
  reinforced.counts = simulate_final_counts(reinforced_exp(10000), 100000, 6, 0);
  for (const auto& [n, c] : reinforced.counts) reinforced.total_users += c;
  CHECK(compare_geometric_vs_powerlaw(reinforced, 10) > 0.0);

  CHECK_THROWS_AS((void)compare_geometric_vs_powerlaw(hist_of({{50, 1}}), 50),
                  InsufficientDataError);
}

TEST_CASE("popularity threshold: nearest rank conventions") {
  std::vector<double> one_to_ten{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  CHECK(popularity_threshold(one_to_ten, 0.9) == 9.0);
  CHECK(popularity_threshold(one_to_ten, 0.5) == 5.0);
  CHECK(popularity_threshold(one_to_ten, 0.05) == 1.0);

  std::vector<double> equal(1000, 3.25);
  const double thr = popularity_threshold(equal, 0.9);
  CHECK(thr == 3.25);
  int popular = 0;
  for (double v : equal) popular += v > thr ? 1 : 0;
  CHECK(popular == 0);  // strict inequality: a degenerate sample has no popular items

  RngStream rng(2, 2);
  std::vector<double> exps;
  exps.reserve(1000000);
  for (int i = 0; i < 1000000; ++i) exps.push_back(rng.exponential(1.0));
  CHECK(std::fabs(popularity_threshold(exps, 0.9) - std::log(10.0)) < 0.01);

  CHECK_THROWS_AS((void)popularity_threshold({}, 0.9), InsufficientDataError);
  CHECK_THROWS_AS((void)popularity_threshold(one_to_ten, 0.0), UsageError);
  CHECK_THROWS_AS((void)popularity_threshold(one_to_ten, 1.0), UsageError);
}

TEST_CASE("reverse index ratios: trivial cases") {
  // Two stopped users with 3 submissions each, everything popular.
  const std::int64_t capture = 1000 * 86400;
  std::vector<EventRecord> records;
  for (int u = 0; u < 2; ++u) {
    for (int j = 0; j < 3; ++j) {
      records.push_back({"u" + std::to_string(u), "i" + std::to_string(3 * u + j),
                         static_cast<std::int64_t>(86400 * (j + 1)), 100.0});
    }
  }
  const auto log = log_of(std::move(records), capture);
  const auto series = reverse_index_ratio(log, 3, 1.0, kCutoff90d);
  REQUIRE(series.size() == 3);
  CHECK(series.labels.front() == "-3");
  CHECK(series.labels.back() == "-1");
  for (double v : series.values) CHECK(v == 1.0);
  for (auto c : series.counts) CHECK(c == 2);

  // No user has K submissions: empty series, not an error.
  CHECK(reverse_index_ratio(log, 5, 1.0, kCutoff90d).empty());
}

TEST_CASE("reverse index ratios reproduce the reference decline shape") {
  // Fixture shaped like the published Digg measurement: 10,000 qualifying
  // users, > 4% popular at the 5th-last index declining to 2% at the last.
  const std::uint64_t users = 10000;
  const std::uint64_t popular_at[5] = {450, 380, 310, 250, 200};  // -5 .. -1
  std::vector<EventRecord> records;
  records.reserve(users * 5);
  const std::int64_t capture = 400 * 86400;
  for (std::uint64_t u = 0; u < users; ++u) {
    for (int j = 0; j < 5; ++j) {  // j = 0 is the oldest (5th-last)
      const bool popular = u < popular_at[j];
      records.push_back({user_id_of(u), "i" + std::to_string(u * 5 + j),
                         static_cast<std::int64_t>(86400 * (j + 2)), popular ? 10.0 : 0.5});
    }
  }
  const auto series = reverse_index_ratio(log_of(std::move(records), capture), 5, 1.0,
                                          kCutoff90d);
  REQUIRE(series.size() == 5);
  CHECK(series.values[0] == doctest::Approx(0.045));
  CHECK(series.values[0] > 0.04);
  CHECK(series.values[4] == doctest::Approx(0.02));
  for (std::size_t i = 1; i < 5; ++i) CHECK(series.values[i] <= series.values[i - 1]);
}

TEST_CASE("reverse index ratios are flat on iid data (3 SE, 95% of repetitions)") {
  ModelParams p = iid_exp();
  p.theta = 0.5;  // longer lifetimes so K=5 keeps a usable population
  p.gap_mean_seconds = kDay;
  int flat_reps = 0;
  const int reps = 40;
  for (int rep = 0; rep < reps; ++rep) {
    SimOptions options;
    options.n_users = 3000;
    options.master_seed = 9000 + rep;
    options.start_time = 0;
    options.capture_time = static_cast<std::int64_t>(3000 * kDay);
    const auto result = simulate_population(p, options);
    std::vector<double> attentions;
    for (const auto& r : result.log.records) attentions.push_back(r.x);
    const double thr = popularity_threshold(std::move(attentions), 0.9);
    const auto series = reverse_index_ratio(result.log, 5, thr, kCutoff90d);
    REQUIRE(series.size() == 5);
    double pooled = 0.0;
    for (double v : series.values) pooled += v;
    pooled /= 5.0;
    bool flat = true;
    for (std::size_t i = 0; i < series.size(); ++i) {
      const double se = std::sqrt(std::max(pooled * (1 - pooled), 1e-12) /
                                  static_cast<double>(series.counts[i]));
      if (std::fabs(series.values[i] - pooled) > 3.0 * se) flat = false;
    }
    flat_reps += flat ? 1 : 0;
  }
  CHECK(flat_reps >= 38);  // 95% of repetitions
}

TEST_CASE("weekly ratios: finals that are never popular give r_f = 0") {
  // Three users stop in different weeks; their last submissions are all
  // unpopular, earlier ones all popular.
  std::vector<EventRecord> records;
  const std::int64_t week = 7 * 86400;
  for (int u = 0; u < 3; ++u) {
    const std::string user = "u" + std::to_string(u);
    const std::int64_t base = 86400 + u * week;
    records.push_back({user, user + "a", base, 50.0});
    records.push_back({user, user + "b", base + week, 0.5});  // final, unpopular
  }
  const auto log = log_of(std::move(records), 1000 * 86400);
  const auto weekly = weekly_final_ratio(log, 1.0, kCutoff90d);
  REQUIRE(weekly.final_only.size() >= 2);
  for (double v : weekly.final_only.values) CHECK(v == 0.0);
  for (std::size_t i = 0; i < weekly.all.size(); ++i) {
    CHECK(weekly.all.labels[i] == weekly.final_only.labels[i]);
  }
}

TEST_CASE("weekly ratios on synthetic cohorts: finals lag the cohort") {
  ModelParams p = reinforced_exp(10000);
  p.gap_mean_seconds = kDay;
  SimOptions options;
  options.n_users = 20000;
  options.master_seed = 2222;
  options.start_time = 1167609600;  // 2007-01-01
  options.arrival_spread_seconds = 26.0 * 7.0 * kDay;
  options.capture_time =
      options.start_time + static_cast<std::int64_t>((26.0 * 7.0 + 95.0) * kDay);
  const auto result = simulate_population(p, options);
  std::vector<double> attentions;
  for (const auto& r : result.log.records) attentions.push_back(r.x);
  const double thr = popularity_threshold(std::move(attentions), 0.9);
  const auto weekly = weekly_final_ratio(result.log, thr, kCutoff90d);
  REQUIRE(weekly.all.size() >= 10);
  int below = 0;
  for (std::size_t i = 0; i < weekly.all.size(); ++i) {
    if (weekly.final_only.values[i] < weekly.all.values[i]) ++below;
  }
  CHECK(below * 2 > static_cast<int>(weekly.all.size()));  // majority of weeks

  // Same shape under iid: finals are the threshold failures there too.
  ModelParams iid = iid_exp();
  iid.theta = 0.5;
  iid.gap_mean_seconds = kDay;
  const auto iid_result = simulate_population(iid, options);
  std::vector<double> iid_attentions;
  for (const auto& r : iid_result.log.records) iid_attentions.push_back(r.x);
  const double iid_thr = popularity_threshold(std::move(iid_attentions), 0.9);
  const auto iid_weekly = weekly_final_ratio(iid_result.log, iid_thr, kCutoff90d);
  int sign_below = 0;
  for (std::size_t i = 0; i < iid_weekly.all.size(); ++i) {
    if (iid_weekly.final_only.values[i] < iid_weekly.all.values[i]) ++sign_below;
  }
  CHECK(sign_below * 2 > static_cast<int>(iid_weekly.all.size()));
}

TEST_CASE("weekly ratios need at least two usable weeks") {
  const auto log = log_of({{"u1", "i1", 100, 1.0}, {"u2", "i2", 200, 2.0}}, 1000 * 86400);
  CHECK_THROWS_AS((void)weekly_final_ratio(log, 0.5, kCutoff90d), InsufficientDataError);
}

TEST_CASE("paired t-test matches the external reference implementation") {
  // Reference t and p values computed with scipy.stats.
  const std::vector<double> x1{1, 2, 3, 4};
  const std::vector<double> y1{2, 3, 4, 6};
  const auto r1 = paired_t_test_less(x1, y1);
  CHECK(r1.t_stat == doctest::Approx(-5.0).epsilon(1e-12));
  CHECK(r1.p_value == doctest::Approx(0.007696219036651148).epsilon(1e-10));

  const std::vector<double> x2{0.5, 1.5, 2.0, 3.7, 2.2, 1.1};
  const std::vector<double> y2{0.6, 1.4, 2.5, 3.1, 2.9, 1.3};
  const auto r2 = paired_t_test_less(x2, y2);
  CHECK(r2.t_stat == doctest::Approx(-0.7115680669648196).epsilon(1e-12));
  CHECK(r2.p_value == doctest::Approx(0.2542718537264208).epsilon(1e-10));

  const std::vector<double> x3{10, 12, 9, 11, 13, 8, 10, 14};
  const std::vector<double> y3{11, 11, 10, 12, 12, 9, 12, 13};
  const auto r3 = paired_t_test_less(x3, y3);
  CHECK(r3.t_stat == doctest::Approx(-0.8930108366813807).epsilon(1e-12));
  CHECK(r3.p_value == doctest::Approx(0.20075381227592629).epsilon(1e-10));
}

TEST_CASE("paired t-test: symmetry, antisymmetry, and degenerate variance") {
  // Differences symmetric about zero give t = 0, p = 1/2 exactly.
  const std::vector<double> x{1.0, 3.0, 5.0, 7.0};
  const std::vector<double> y{2.0, 2.0, 7.0, 5.0};  // d = -1, 1, -2, 2
  const auto r = paired_t_test_less(x, y);
  CHECK(r.t_stat == 0.0);
  CHECK(r.p_value == 0.5);

  std::mt19937_64 rng(404);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<double> a(12), b(12);
    for (int i = 0; i < 12; ++i) {
      a[i] = gauss(rng);
      b[i] = gauss(rng) + 0.2;
    }
    const auto pq = paired_t_test_less(a, b);
    const auto qp = paired_t_test_less(b, a);
    CHECK(std::fabs(pq.p_value + qp.p_value - 1.0) < 1e-10);
    // Cross-check against quadrature of the t density.
    CHECK(std::fabs(pq.p_value - oracles::student_t_cdf_quadrature(pq.t_stat, 11.0)) < 1e-8);
  }

  const std::vector<double> c{1, 2, 3};
  const std::vector<double> shifted{2, 3, 4};  // d identically -1: sd = 0
  CHECK_THROWS_WITH_AS(paired_t_test_less(c, shifted), doctest::Contains("sign = -1"),
                       DegenerateDataError);
  CHECK_THROWS_AS(paired_t_test_less(c, c), DegenerateDataError);
  CHECK_THROWS_AS(paired_t_test_less(c, std::vector<double>{1.0}), UsageError);
}

TEST_CASE("binned means follow the documented edge conventions") {
  using Pair = std::pair<double, double>;
  // Fixed width 20, right-inclusive: key 20 -> bin 1, key 21 -> bin 2.
  {
    const std::vector<Pair> pairs{{20.0, 1.0}, {21.0, 2.0}};
    const auto bins = binned_mean(pairs, BinScheme::kFixedWidth, 20.0);
    REQUIRE(bins.rows.size() == 2);
    CHECK(bins.rows[0].bin == 1);
    CHECK(bins.rows[0].lo == 0.0);
    CHECK(bins.rows[0].hi == 20.0);
    CHECK(bins.rows[1].bin == 2);
  }
  // Pow2, left-inclusive: key 4 -> bin 3 covering [4, 8); key 3 -> bin 2.
  {
    const std::vector<Pair> pairs{{4.0, 1.0}, {3.0, 2.0}, {7.999, 3.0}, {8.0, 4.0}};
    const auto bins = binned_mean(pairs, BinScheme::kPow2, 0.0);
    REQUIRE(bins.rows.size() == 3);
    CHECK(bins.rows[0].bin == 2);
    CHECK(bins.rows[0].count == 1);
    CHECK(bins.rows[1].bin == 3);
    CHECK(bins.rows[1].lo == 4.0);
    CHECK(bins.rows[1].hi == 8.0);
    CHECK(bins.rows[1].count == 2);
    CHECK(bins.rows[2].bin == 4);
  }
  // A single pair is its own bin in either scheme.
  for (const auto scheme : {BinScheme::kFixedWidth, BinScheme::kPow2}) {
    const std::vector<Pair> pairs{{5.0, 7.0}};
    const auto bins = binned_mean(pairs, scheme, 20.0);
    REQUIRE(bins.rows.size() == 1);
    CHECK(bins.rows[0].mean == 7.0);
    CHECK(bins.rows[0].count == 1);
  }
  // Nonpositive keys are rejected and reported, not binned.
  {
    const std::vector<Pair> pairs{{0.0, 1.0}, {-3.0, 1.0}, {2.0, 5.0}};
    const auto bins = binned_mean(pairs, BinScheme::kPow2, 0.0);
    CHECK(bins.rejected == 2);
    REQUIRE(bins.rows.size() == 1);
    CHECK(bins.rows[0].count == 1);
  }
  CHECK_THROWS_AS((void)binned_mean(std::vector<Pair>{}, BinScheme::kPow2, 0.0), UsageError);
  CHECK_THROWS_AS((void)binned_mean(std::vector<Pair>{{1.0, 1.0}}, BinScheme::kFixedWidth, 0.5),
                  UsageError);
}

TEST_CASE("binned means partition every positive key into exactly one bin") {
  std::mt19937_64 rng(8080);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (const auto scheme : {BinScheme::kFixedWidth, BinScheme::kPow2}) {
    std::vector<std::pair<double, double>> pairs;
    std::uint64_t in_range = 0;
    for (int i = 0; i < 5000; ++i) {
      double key;
      const double u = unit(rng);
      if (u < 0.1) {
        key = 0.0;
      } else if (u < 0.2) {
        key = std::exp2(1.0 + (unit(rng) * 12.0));  // exact-ish powers region
      } else {
        key = unit(rng) * 10000.0;
      }
      if (key > 0.0) ++in_range;
      pairs.emplace_back(key, unit(rng));
    }
    const auto bins = binned_mean(pairs, scheme, 17.0);
    std::uint64_t total = 0;
    for (const auto& row : bins.rows) total += row.count;
    CHECK(total == in_range);
    CHECK(bins.rejected == pairs.size() - in_range);
    // Edges are adjacent: each row's hi is the next row's lo when bins are
    // contiguous, and every key lies inside its bin's half-open interval.
    for (const auto& row : bins.rows) {
      CHECK(row.lo < row.hi);
      if (scheme == BinScheme::kFixedWidth) {
        CHECK(row.mean_key > row.lo);
        CHECK(row.mean_key <= row.hi);
      } else {
        CHECK(row.mean_key >= row.lo);
        CHECK(row.mean_key < row.hi);
      }
    }
    for (std::size_t i = 1; i < bins.rows.size(); ++i) {
      if (bins.rows[i].bin == bins.rows[i - 1].bin + 1) {
        CHECK(bins.rows[i].lo == doctest::Approx(bins.rows[i - 1].hi));
      }
    }
  }
}
