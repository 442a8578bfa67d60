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
// Population simulation: per-contributor submission trajectories with
// timestamps, attention, fan accrual and stopping, emitted as an EventLog.
//
// Every contributor owns one RNG stream addressed by (master_seed,
// user_index), so results are independent of worker count and scheduling.
// Within a stream the draw order per submission is fixed:
//   [arrival offset once, if arrival_spread_seconds > 0]
//   y -> fan conversions (FanLoop only) -> inter-submission gap (if continuing)

#ifndef ATTNLOOP_SIMULATE_HPP_
#define ATTNLOOP_SIMULATE_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "attnloop/events.hpp"
#include "attnloop/model.hpp"

namespace attnloop {

struct ContributorHistory {
  std::string user_id;
  std::vector<AttentionSample> samples;     // indices 1..samples.size()
  std::vector<std::int64_t> timestamps;     // strictly increasing, one per sample
  bool stopped = false;                     // false when n_cap ended the run
  std::uint64_t fans_after = 0;             // fan count after the last submission
};

// Simulates one contributor's full life (no censoring). Deterministic in
// (params, master_seed, user_index, start_time).
ContributorHistory simulate_contributor(const ModelParams& params, std::uint64_t master_seed,
                                        std::uint64_t user_index, std::int64_t start_time);

// New fans recruited by one submission. Conversions are drawn only from the
// base (non-fan) audience: Binomial(round(base_views), c2) where base_views
// is the c0*y component of the submission's attention. Recruiting from total
// attention instead would compound through c1 and give exponential fan
// growth, contradicting the linear fan-productivity relationship this model
// reproduces; with the base-audience rule, fans grow by c2*c0 per submission
// and expected attention approaches (c1*c2*c0)*n*y, i.e. the reinforced
// model with a = c1*c2*c0.
std::uint64_t fan_conversions(double base_views, const ModelParams& params, RngStream& rng);

struct SimOptions {
  std::uint64_t n_users = 0;
  std::uint64_t master_seed = 0;
  std::int64_t start_time = 0;
  std::int64_t capture_time = 0;
  // > 0 staggers user arrivals uniformly over [start_time, start_time+spread).
  double arrival_spread_seconds = 0.0;
  // When set, a FanSnapshot of every user's fan count at this instant is
  // returned with the log.
  std::optional<std::int64_t> snapshot_time;
  int threads = 0;  // 0 = hardware concurrency (capped by ATTN_LOOP_THREADS)
};

struct SimResult {
  EventLog log;  // sorted by user id then timestamp; truncated at capture_time
  std::optional<FanSnapshot> snapshot;
};

// Simulates n_users contributors and concatenates their records. Records
// after capture_time are dropped (a user may be censored mid-life, as in a
// real crawl). Identical inputs give byte-identical logs at any thread count.
SimResult simulate_population(const ModelParams& params, const SimOptions& options);

// Contribution-count-only fast path: the final submission count of every
// user, without materializing records (no timestamps kept, no censoring).
// Consumes each user's RNG stream exactly like simulate_contributor, so the
// two paths produce identical per-user counts.
// Returns map n -> number of users whose final count is n.
std::map<std::uint64_t, std::uint64_t> simulate_final_counts(const ModelParams& params,
                                                             std::uint64_t n_users,
                                                             std::uint64_t master_seed,
                                                             int threads = 0);

// "u%08llu" — fixed width keeps lexicographic and numeric order identical.
std::string user_id_of(std::uint64_t user_index);

// Worker count actually used for `requested` (0 = auto), honoring the
// ATTN_LOOP_THREADS environment cap.
int resolve_worker_count(int requested);

}  // namespace attnloop

#endif  // ATTNLOOP_SIMULATE_HPP_
