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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <thread>

#include "attnloop/errors.hpp"

namespace attnloop {

namespace {

struct LeanRecord {
  std::uint64_t user_index;
  std::int64_t t;
  double x;
};

// One contributor's life. Draw order per submission is fixed (see header);
// the loop exits before drawing anything once t passes capture_limit, which
// is equivalent to generating the full history and truncating.
struct UserOutcome {
  std::uint64_t n_final = 0;
  bool stopped = false;
  std::uint64_t fans_after = 0;
  std::uint64_t fans_at_snapshot = 0;
  bool censored = false;
};

template <typename EmitFn>
UserOutcome run_user(const ModelParams& params, RngStream& rng, std::int64_t start_time,
                     std::int64_t capture_limit, std::optional<std::int64_t> snapshot_time,
                     EmitFn&& emit) {
  UserOutcome out;
  const bool fanloop = params.variant == ModelVariant::kFanLoop;
  std::uint64_t fans = 0;
  std::int64_t t = start_time;
  for (std::uint64_t n = 1;; ++n) {
    if (t > capture_limit) {
      out.censored = true;
      break;
    }
    const double y = params.noise.sample(rng);
    const double x = attention_of(params, n, fans, y);
    emit(n, fans, x, t);
    if (fanloop) {
      fans += fan_conversions(params.c0 * y, params, rng);
    }
    if (snapshot_time && t <= *snapshot_time) {
      out.fans_at_snapshot = fans;
    }
    out.n_final = n;
    if (stop_decision(x, params.theta)) {
      out.stopped = true;
      break;
    }
    if (n == params.n_cap) {
      break;
    }
    const double gap = rng.exponential(params.gap_mean_seconds);
    t += std::max<std::int64_t>(1, std::llround(gap));
  }
  out.fans_after = fans;
  return out;
}

std::int64_t arrival_offset(RngStream& rng, double spread_seconds) {
  return static_cast<std::int64_t>(rng.uniform01() * spread_seconds);
}

}  // namespace

std::string user_id_of(std::uint64_t user_index) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "u%08llu", static_cast<unsigned long long>(user_index));
  return buf;
}

int resolve_worker_count(int requested) {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  int n = requested > 0 ? requested : static_cast<int>(hw);
  if (const char* env = std::getenv("ATTN_LOOP_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) n = std::min(n, cap);
  }
  return std::max(1, n);
}

std::uint64_t fan_conversions(double base_views, const ModelParams& params, RngStream& rng) {
  if (params.variant != ModelVariant::kFanLoop) {
    throw UsageError("fan_conversions: only defined for the fanloop variant");
  }
  if (base_views < 0.0) throw UsageError("fan_conversions: base_views must be >= 0");
  const auto trials = static_cast<std::uint64_t>(std::llround(base_views));
  return rng.binomial(trials, params.c2);
}

ContributorHistory simulate_contributor(const ModelParams& params, std::uint64_t master_seed,
                                        std::uint64_t user_index, std::int64_t start_time) {
  params.validate();
  ContributorHistory history;
  history.user_id = user_id_of(user_index);
  RngStream rng(master_seed, user_index);
  const auto outcome = run_user(params, rng, start_time, std::numeric_limits<std::int64_t>::max(),
                                std::nullopt,
                                [&](std::uint64_t n, std::uint64_t fans, double x, std::int64_t t) {
                                  history.samples.push_back({n, fans, x});
                                  history.timestamps.push_back(t);
                                });
  history.stopped = outcome.stopped;
  history.fans_after = outcome.fans_after;
  return history;
}

SimResult simulate_population(const ModelParams& params, const SimOptions& options) {
  params.validate();
  if (options.capture_time <= options.start_time) {
    throw UsageError("simulate_population: capture_time must be > start_time");
  }
  if (options.arrival_spread_seconds < 0.0) {
    throw UsageError("simulate_population: arrival_spread_seconds must be >= 0");
  }

  SimResult result;
  result.log.capture_time = options.capture_time;
  if (options.snapshot_time) {
    result.snapshot.emplace();
    result.snapshot->snapshot_time = *options.snapshot_time;
  }
  if (options.n_users == 0) {
    return result;
  }

  const int workers =
      static_cast<int>(std::min<std::uint64_t>(resolve_worker_count(options.threads),
                                               options.n_users));
  std::vector<std::vector<LeanRecord>> chunk_records(workers);
  std::vector<std::vector<std::pair<std::uint64_t, std::uint64_t>>> chunk_fans(workers);

  auto worker_fn = [&](int w) {
    const std::uint64_t lo = options.n_users * w / workers;
    const std::uint64_t hi = options.n_users * (w + 1) / workers;
    auto& records = chunk_records[w];
    auto& fans = chunk_fans[w];
    for (std::uint64_t u = lo; u < hi; ++u) {
      RngStream rng(options.master_seed, u);
      std::int64_t start = options.start_time;
      if (options.arrival_spread_seconds > 0.0) {
        start += arrival_offset(rng, options.arrival_spread_seconds);
      }
      const auto outcome =
          run_user(params, rng, start, options.capture_time, options.snapshot_time,
                   [&](std::uint64_t, std::uint64_t, double x, std::int64_t t) {
                     records.push_back({u, t, x});
                   });
      if (options.snapshot_time) {
        fans.emplace_back(u, outcome.fans_at_snapshot);
      }
    }
  };

  if (workers == 1) {
    worker_fn(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker_fn, w);
    for (auto& th : pool) th.join();
  }

  // Chunks cover contiguous user ranges in order, and per-user timestamps
  // are strictly increasing, so concatenation is already the normalized
  // (user, timestamp) order. Item ids are assigned in final order.
  std::size_t total = 0;
  for (const auto& c : chunk_records) total += c.size();
  result.log.records.reserve(total);
  std::uint64_t item_seq = 0;
  char item_buf[24];
  for (const auto& chunk : chunk_records) {
    for (const auto& r : chunk) {
      std::snprintf(item_buf, sizeof item_buf, "i%09llu",
                    static_cast<unsigned long long>(item_seq++));
      result.log.records.push_back({user_id_of(r.user_index), item_buf, r.t, r.x});
    }
  }
  if (options.snapshot_time) {
    result.snapshot->entries.reserve(options.n_users);
    for (const auto& chunk : chunk_fans) {
      for (const auto& [u, f] : chunk) {
        result.snapshot->entries.emplace(user_id_of(u), f);
      }
    }
  }
  return result;
}

std::map<std::uint64_t, std::uint64_t> simulate_final_counts(const ModelParams& params,
                                                             std::uint64_t n_users,
                                                             std::uint64_t master_seed,
                                                             int threads) {
  params.validate();
  std::map<std::uint64_t, std::uint64_t> histogram;
  if (n_users == 0) return histogram;

  const int workers =
      static_cast<int>(std::min<std::uint64_t>(resolve_worker_count(threads), n_users));
  std::vector<std::vector<std::uint64_t>> chunk_counts(
      workers, std::vector<std::uint64_t>(params.n_cap + 1, 0));

  auto worker_fn = [&](int w) {
    const std::uint64_t lo = n_users * w / workers;
    const std::uint64_t hi = n_users * (w + 1) / workers;
    auto& counts = chunk_counts[w];
    for (std::uint64_t u = lo; u < hi; ++u) {
      RngStream rng(master_seed, u);
      const auto outcome =
          run_user(params, rng, 0, std::numeric_limits<std::int64_t>::max(), std::nullopt,
                   [](std::uint64_t, std::uint64_t, double, std::int64_t) {});
      ++counts[outcome.n_final];
    }
  };

  if (workers == 1) {
    worker_fn(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker_fn, w);
    for (auto& th : pool) th.join();
  }

  for (std::uint64_t n = 1; n <= params.n_cap; ++n) {
    std::uint64_t total = 0;
    for (const auto& counts : chunk_counts) total += counts[n];
    if (total > 0) histogram[n] = total;
  }
  return histogram;
}

}  // namespace attnloop
