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
// Shared event data: the flat submission log exchanged between simulator,
// ingest and estimators, plus fan-count snapshots and cohort windows.

#ifndef ATTNLOOP_EVENTS_HPP_
#define ATTNLOOP_EVENTS_HPP_

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace attnloop {

struct EventRecord {
  std::string user;
  std::string item;
  std::int64_t t = 0;  // epoch seconds
  double x = 0.0;      // attention

  bool operator==(const EventRecord&) const = default;
};

// Flat timestamped submission records. No ordering is guaranteed (externally
// parsed logs arrive as-is); consumers group and sort per user themselves.
struct EventLog {
  std::vector<EventRecord> records;
  std::int64_t capture_time = 0;  // time of data collection

  bool operator==(const EventLog&) const = default;
};

// Fan counts of contributors observed at one instant.
struct FanSnapshot {
  std::unordered_map<std::string, std::uint64_t> entries;
  std::int64_t snapshot_time = 0;
};

struct CohortWindow {
  std::int64_t start = 0;
  std::int64_t end = 0;  // exclusive
};

}  // namespace attnloop

#endif  // ATTNLOOP_EVENTS_HPP_
