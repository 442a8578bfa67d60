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
// Event-log and fan-snapshot ingestion plus the filtering definitions used
// by the analyses: stopped users, final submissions, cohort joins.

#ifndef ATTNLOOP_INGEST_HPP_
#define ATTNLOOP_INGEST_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "attnloop/events.hpp"

namespace attnloop {

enum class LogFormat { kAuto, kJsonLines, kCsv };

struct ParseIssue {
  std::size_t line = 0;  // 1-based
  std::string message;
};

struct ParseReport {
  std::vector<ParseIssue> issues;  // at most kMaxIssues retained
  std::size_t malformed = 0;       // total malformed lines
  std::size_t parsed = 0;          // records accepted

  static constexpr std::size_t kMaxIssues = 100;
};

// Parses JSON Lines or CSV event logs. Both formats start with a
// `#capture_time=<epoch>` header line; an explicit capture_override wins
// over the header. Malformed lines are collected into `report` with line
// numbers; more than 1% malformed lines (or a missing capture time) is a
// hard failure.
EventLog parse_event_log(std::istream& in, LogFormat format,
                         std::optional<std::int64_t> capture_override = std::nullopt,
                         ParseReport* report = nullptr);

// File variant; kAuto picks the format from the extension, falling back to
// content sniffing ('{' starts JSON Lines).
EventLog read_event_log(const std::string& path, LogFormat format = LogFormat::kAuto,
                        std::optional<std::int64_t> capture_override = std::nullopt,
                        ParseReport* report = nullptr);

void write_event_log(const EventLog& log, std::ostream& out, LogFormat format);
void write_event_log(const EventLog& log, const std::string& path,
                     LogFormat format = LogFormat::kAuto);

// Canonical JSON Lines serialization digest input; two logs are
// byte-identical iff their serializations are.
std::string serialize_event_log(const EventLog& log, LogFormat format);

// FanSnapshot files: CSV with a `#snapshot_time=<epoch>` header line
// followed by a `user,fans` header row.
FanSnapshot read_fan_snapshot(const std::string& path);
void write_fan_snapshot(const FanSnapshot& snap, const std::string& path);

// Users whose latest record is at least T seconds before capture
// (boundary inclusive: last record exactly at capture - T still counts).
std::unordered_set<std::string> filter_stopped_users(const EventLog& log, double T_seconds);

struct FanJoinRow {
  std::string user;
  std::uint64_t past_productivity = 0;  // records strictly before window.start
  std::uint64_t fans = 0;               // snapshot count; absent users get 0
  std::vector<double> attentions;       // records in [window.start, window.end)
};

// Joins snapshot fan counts to in-window submissions, one row per user with
// at least one in-window record. `exclude` removes users entirely (the
// caller-supplied outlier list); exclusion is never automatic.
std::vector<FanJoinRow> fan_attention_join(const EventLog& log, const FanSnapshot& snap,
                                           const CohortWindow& window,
                                           const std::unordered_set<std::string>* exclude = nullptr);

// One user id per nonempty line; '#' lines are comments.
std::unordered_set<std::string> read_user_list(const std::string& path);

}  // namespace attnloop

#endif  // ATTNLOOP_INGEST_HPP_
