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

#include "attnloop/simulate.hpp"

#include <cmath>
#include <random>
#include <unordered_set>

#include <doctest.h>

#include "attnloop/errors.hpp"
#include "attnloop/ingest.hpp"
#include "attnloop/stats.hpp"
#include "oracles.hpp"

using namespace attnloop;

namespace {

ModelParams iid_constant(double a) {
  ModelParams p;
  p.variant = ModelVariant::kIid;
  p.a = a;
  p.noise = NoiseKernel::constant();
  p.n_cap = 10;
  return p;
}

ModelParams reinforced_exp(std::uint64_t n_cap = 100000) {
  ModelParams p;
  p.variant = ModelVariant::kReinforced;
  p.noise = NoiseKernel::exponential();
  p.n_cap = n_cap;
  return p;
}

ModelParams fanloop_params() {
  ModelParams p;
  p.variant = ModelVariant::kFanLoop;
  p.noise = NoiseKernel::exponential();
  p.c0 = 100.0;
  p.c1 = 0.05;
  p.c2 = 0.1;
  p.n_cap = 100000;
  return p;
}

}  // namespace

TEST_CASE("deterministic continue: constant noise above theta runs to the cap") {
  const auto history = simulate_contributor(iid_constant(2.0), 1, 0, 1000);
  CHECK(history.samples.size() == 10);  // n_cap
  CHECK_FALSE(history.stopped);
  for (std::size_t i = 0; i < history.samples.size(); ++i) {
    CHECK(history.samples[i].index == i + 1);
    CHECK(history.samples[i].attention == doctest::Approx(2.0));
  }
}

TEST_CASE("boundary: constant noise exactly at theta stops immediately") {
  const auto history = simulate_contributor(iid_constant(1.0), 1, 0, 1000);
  CHECK(history.samples.size() == 1);
  CHECK(history.stopped);
  CHECK(history.timestamps[0] == 1000);
}

TEST_CASE("histories keep their structural invariants") {
  const ModelParams p = reinforced_exp(200);
  for (std::uint64_t user = 0; user < 300; ++user) {
    const auto history = simulate_contributor(p, 99, user, 0);
    REQUIRE(history.samples.size() >= 1);
    REQUIRE(history.samples.size() == history.timestamps.size());
    for (std::size_t i = 0; i < history.samples.size(); ++i) {
      CHECK(history.samples[i].index == i + 1);
      CHECK(history.samples[i].attention >= 0.0);
      if (i > 0) {
        CHECK(history.timestamps[i] > history.timestamps[i - 1]);
        CHECK(history.samples[i].fans_before >= history.samples[i - 1].fans_before);
      }
    }
    if (!history.stopped) CHECK(history.samples.size() == p.n_cap);
  }
}

TEST_CASE("fraction stopping at n=1 matches P(Y <= 1) = 1 - 1/e") {
  const ModelParams p = reinforced_exp();
  const std::uint64_t users = 1000000;
  const auto counts = simulate_final_counts(p, users, 20260809, 0);
  const double frac_one =
      static_cast<double>(counts.at(1)) / static_cast<double>(users);
  CHECK(std::fabs(frac_one - (1.0 - std::exp(-1.0))) < 0.002);
}

TEST_CASE("fan conversions: edge probabilities and the binomial mean") {
  ModelParams p = fanloop_params();
  RngStream rng(4, 4);

  p.c2 = 0.0;
  CHECK(fan_conversions(70.0, p, rng) == 0);
  p.c2 = 1.0;
  CHECK(fan_conversions(7.0, p, rng) == 7);

  p.c2 = 0.1;
  p.c0 = 100.0;
  double total = 0.0;
  const int reps = 100000;
  RngStream noise_rng(4, 5);
  for (int i = 0; i < reps; ++i) {
    const double y = p.noise.sample(noise_rng);
    total += static_cast<double>(fan_conversions(p.c0 * y, p, rng));
  }
  CHECK(total / reps == doctest::Approx(p.c2 * p.c0).epsilon(0.01));  // 10 +/- 0.1

  ModelParams iid = iid_constant(1.0);
  CHECK_THROWS_AS((void)fan_conversions(10.0, iid, rng), UsageError);
}

TEST_CASE("empty population is a valid empty log") {
  SimOptions options;
  options.n_users = 0;
  options.master_seed = 5;
  options.start_time = 0;
  options.capture_time = 100;
  const auto result = simulate_population(reinforced_exp(), options);
  CHECK(result.log.records.empty());
  CHECK(result.log.capture_time == 100);
}

TEST_CASE("same seed gives byte-identical logs; different seeds differ") {
  SimOptions options;
  options.n_users = 500;
  options.master_seed = 77;
  options.start_time = 1167609600;
  options.capture_time = options.start_time + 365 * 86400;
  const ModelParams p = reinforced_exp(1000);

  const auto a = simulate_population(p, options);
  const auto b = simulate_population(p, options);
  CHECK(serialize_event_log(a.log, LogFormat::kJsonLines) ==
        serialize_event_log(b.log, LogFormat::kJsonLines));

  options.master_seed = 78;
  const auto c = simulate_population(p, options);
  CHECK(serialize_event_log(a.log, LogFormat::kJsonLines) !=
        serialize_event_log(c.log, LogFormat::kJsonLines));
}

TEST_CASE("logs are identical across worker counts") {
  SimOptions options;
  options.n_users = 2000;
  options.master_seed = 31;
  options.start_time = 0;
  options.capture_time = 200 * 86400;
  options.arrival_spread_seconds = 60.0 * 86400.0;
  const ModelParams p = reinforced_exp(5000);

  options.threads = 1;
  const auto one = simulate_population(p, options);
  options.threads = 2;
  const auto two = simulate_population(p, options);
  options.threads = 8;
  const auto eight = simulate_population(p, options);
  const auto bytes = serialize_event_log(one.log, LogFormat::kJsonLines);
  CHECK(bytes == serialize_event_log(two.log, LogFormat::kJsonLines));
  CHECK(bytes == serialize_event_log(eight.log, LogFormat::kJsonLines));
}

TEST_CASE("population records match per-user histories truncated at capture") {
  SimOptions options;
  options.n_users = 50;
  options.master_seed = 12;
  options.start_time = 5000;
  options.capture_time = options.start_time + 30 * 86400;  // short capture: censors some users
  const ModelParams p = reinforced_exp(4000);
  const auto result = simulate_population(p, options);

  std::size_t cursor = 0;
  for (std::uint64_t u = 0; u < options.n_users; ++u) {
    const auto history = simulate_contributor(p, options.master_seed, u, options.start_time);
    for (std::size_t i = 0;
         i < history.samples.size() && history.timestamps[i] <= options.capture_time; ++i) {
      REQUIRE(cursor < result.log.records.size());
      const auto& r = result.log.records[cursor++];
      CHECK(r.user == history.user_id);
      CHECK(r.t == history.timestamps[i]);
      CHECK(r.x == history.samples[i].attention);
    }
  }
  CHECK(cursor == result.log.records.size());
}

TEST_CASE("records are censored, ordered, and item ids are unique") {
  SimOptions options;
  options.n_users = 800;
  options.master_seed = 9;
  options.start_time = 0;
  options.capture_time = 50 * 86400;
  options.arrival_spread_seconds = 40.0 * 86400.0;
  const auto result = simulate_population(reinforced_exp(2000), options);

  std::unordered_set<std::string> items;
  for (std::size_t i = 0; i < result.log.records.size(); ++i) {
    const auto& r = result.log.records[i];
    CHECK(r.t <= options.capture_time);
    CHECK(items.insert(r.item).second);
    if (i > 0) {
      const auto& prev = result.log.records[i - 1];
      const bool ordered = prev.user < r.user || (prev.user == r.user && prev.t < r.t);
      CHECK(ordered);
    }
  }
}

TEST_CASE("final-count fast path equals full histories user by user") {
  const ModelParams p = reinforced_exp(500);
  const std::uint64_t users = 300;
  const auto counts = simulate_final_counts(p, users, 555, 2);
  std::map<std::uint64_t, std::uint64_t> expected;
  for (std::uint64_t u = 0; u < users; ++u) {
    const auto history = simulate_contributor(p, 555, u, 0);
    ++expected[history.samples.size()];
  }
  CHECK(counts == expected);
}

TEST_CASE("population mean lifetime matches an independent Monte Carlo oracle") {
  const ModelParams p = reinforced_exp(10000);
  const std::uint64_t users = 1000000;
  const auto counts = simulate_final_counts(p, users, 424242, 0);
  double lib_sum = 0.0;
  double lib_sq = 0.0;
  for (const auto& [n, c] : counts) {
    lib_sum += static_cast<double>(n) * static_cast<double>(c);
    lib_sq += static_cast<double>(n) * static_cast<double>(n) * static_cast<double>(c);
  }
  const double lib_mean = lib_sum / static_cast<double>(users);
  const double lib_var = lib_sq / static_cast<double>(users) - lib_mean * lib_mean;

  std::mt19937_64 rng(98765);
  double oracle_sum = 0.0;
  double oracle_sq = 0.0;
  const std::uint64_t trials = 1000000;
  for (std::uint64_t i = 0; i < trials; ++i) {
    const auto n = static_cast<double>(oracles::lifetime(
        oracles::OracleModel::kReinforced, oracles::OracleNoise::kExponential, p.a, p.theta, 1.0,
        p.n_cap, rng));
    oracle_sum += n;
    oracle_sq += n * n;
  }
  const double oracle_mean = oracle_sum / static_cast<double>(trials);
  const double oracle_var = oracle_sq / static_cast<double>(trials) - oracle_mean * oracle_mean;

  const double se = std::sqrt(lib_var / static_cast<double>(users) +
                              oracle_var / static_cast<double>(trials));
  CHECK(std::fabs(lib_mean - oracle_mean) < 4.0 * se);
}

TEST_CASE("arrival spread staggers starts deterministically inside the window") {
  SimOptions options;
  options.n_users = 400;
  options.master_seed = 3;
  options.start_time = 1000000;
  options.capture_time = options.start_time + 400 * 86400;
  options.arrival_spread_seconds = 100.0 * 86400.0;
  const auto result = simulate_population(iid_constant(0.5), options);  // everyone stops at n=1
  REQUIRE(result.log.records.size() == options.n_users);
  std::int64_t min_t = result.log.records.front().t;
  std::int64_t max_t = min_t;
  for (const auto& r : result.log.records) {
    min_t = std::min(min_t, r.t);
    max_t = std::max(max_t, r.t);
  }
  CHECK(min_t >= options.start_time);
  CHECK(max_t <
        options.start_time + static_cast<std::int64_t>(options.arrival_spread_seconds));
  CHECK(max_t - min_t > 50 * 86400);  // actually spread out
}

TEST_CASE("fan snapshot equals fans recomputed from the history at that instant") {
  SimOptions options;
  options.n_users = 120;
  options.master_seed = 88;
  options.start_time = 0;
  options.capture_time = 500 * 86400;
  options.snapshot_time = 60 * 86400;
  const ModelParams p = fanloop_params();
  const auto result = simulate_population(p, options);
  REQUIRE(result.snapshot.has_value());
  CHECK(result.snapshot->snapshot_time == *options.snapshot_time);
  CHECK(result.snapshot->entries.size() == options.n_users);

  for (std::uint64_t u = 0; u < options.n_users; ++u) {
    const auto history = simulate_contributor(p, options.master_seed, u, options.start_time);
    std::uint64_t fans = history.fans_after;
    for (std::size_t i = 0; i < history.samples.size(); ++i) {
      if (history.timestamps[i] > *options.snapshot_time) {
        fans = history.samples[i].fans_before;
        break;
      }
    }
    CHECK(result.snapshot->entries.at(history.user_id) == fans);
  }
}

TEST_CASE("fanloop mean fans grow linearly with the submission index") {
  // Figs. 5a/6a analog on per-submission data: E[fans_before at n] = c2*c0*(n-1).
  const ModelParams p = fanloop_params();
  std::map<std::uint64_t, std::pair<double, std::uint64_t>> by_index;
  for (std::uint64_t u = 0; u < 4000; ++u) {
    const auto history = simulate_contributor(p, 60, u, 0);
    for (const auto& s : history.samples) {
      auto& acc = by_index[s.index];
      acc.first += static_cast<double>(s.fans_before);
      ++acc.second;
    }
  }
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& [n, acc] : by_index) {
    if (acc.second < 200) continue;  // keep well-populated indices only
    xs.push_back(static_cast<double>(n));
    ys.push_back(acc.first / static_cast<double>(acc.second));
  }
  REQUIRE(xs.size() >= 20);
  const auto fit = linear_fit(xs, ys);
  CHECK(fit.r2 > 0.99);
  CHECK(fit.slope == doctest::Approx(p.c2 * p.c0).epsilon(0.10));
}

TEST_CASE("simulate_population validates its window") {
  SimOptions options;
  options.n_users = 1;
  options.start_time = 100;
  options.capture_time = 100;
  CHECK_THROWS_AS((void)simulate_population(reinforced_exp(), options), UsageError);
}
