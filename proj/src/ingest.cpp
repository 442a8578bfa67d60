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

#include "attnloop/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "attnloop/errors.hpp"

namespace attnloop {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parse_i64(const std::string& s, std::int64_t* out) {
  if (s.empty()) return false;
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (errno != 0 || end != s.c_str() + s.size()) return false;
  *out = v;
  return true;
}

bool parse_f64(const std::string& s, double* out) {
  if (s.empty()) return false;
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (errno != 0 || end != s.c_str() + s.size()) return false;
  *out = v;
  return true;
}

void add_issue(ParseReport* report, std::size_t line, std::string message) {
  if (report == nullptr) return;
  ++report->malformed;
  if (report->issues.size() < ParseReport::kMaxIssues) {
    report->issues.push_back({line, std::move(message)});
  }
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = line.find(',', pos);
    if (comma == std::string::npos) {
      fields.push_back(trim(line.substr(pos)));
      break;
    }
    fields.push_back(trim(line.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  return fields;
}

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

EventLog parse_event_log(std::istream& in, LogFormat format,
                         std::optional<std::int64_t> capture_override, ParseReport* report) {
  ParseReport local_report;
  if (report == nullptr) report = &local_report;
  *report = ParseReport{};

  EventLog log;
  std::optional<std::int64_t> header_capture;
  std::unordered_set<std::string> seen_items;
  std::unordered_set<std::string> seen_user_times;
  // CSV column order, filled from the header row.
  int col_user = -1, col_item = -1, col_t = -1, col_x = -1;
  bool saw_csv_header = false;

  const bool capture_known_upfront = capture_override.has_value();
  std::size_t data_lines = 0;
  std::size_t line_no = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    if (stripped[0] == '#') {
      constexpr std::string_view kCaptureKey = "#capture_time=";
      if (stripped.rfind(kCaptureKey, 0) == 0) {
        std::int64_t value = 0;
        if (!parse_i64(stripped.substr(kCaptureKey.size()), &value)) {
          add_issue(report, line_no, "bad #capture_time header");
        } else if (!header_capture) {
          header_capture = value;
        }
      }
      continue;
    }

    if (format == LogFormat::kAuto) {
      format = stripped[0] == '{' ? LogFormat::kJsonLines : LogFormat::kCsv;
    }

    if (format == LogFormat::kCsv && !saw_csv_header) {
      const auto cols = split_csv(stripped);
      for (int i = 0; i < static_cast<int>(cols.size()); ++i) {
        if (cols[i] == "user") col_user = i;
        else if (cols[i] == "item") col_item = i;
        else if (cols[i] == "t") col_t = i;
        else if (cols[i] == "x") col_x = i;
      }
      if (col_user < 0 || col_item < 0 || col_t < 0 || col_x < 0) {
        throw IoError("event log CSV header must name columns user,item,t,x");
      }
      saw_csv_header = true;
      continue;
    }

    ++data_lines;
    EventRecord record;
    bool ok = true;
    std::string error;
    if (format == LogFormat::kJsonLines) {
      const json j = json::parse(stripped, nullptr, false);
      if (j.is_discarded() || !j.is_object()) {
        ok = false;
        error = "not a JSON object";
      } else if (!j.contains("user") || !j["user"].is_string() || !j.contains("item") ||
                 !j["item"].is_string() || !j.contains("t") || !j["t"].is_number_integer() ||
                 !j.contains("x") || !j["x"].is_number()) {
        ok = false;
        error = "missing or mistyped field (need user,item,t,x)";
      } else {
        record.user = j["user"].get<std::string>();
        record.item = j["item"].get<std::string>();
        record.t = j["t"].get<std::int64_t>();
        record.x = j["x"].get<double>();
      }
    } else {
      const auto fields = split_csv(stripped);
      const int needed = std::max({col_user, col_item, col_t, col_x});
      if (static_cast<int>(fields.size()) <= needed) {
        ok = false;
        error = "too few CSV fields";
      } else {
        record.user = fields[col_user];
        record.item = fields[col_item];
        if (!parse_i64(fields[col_t], &record.t)) {
          ok = false;
          error = "bad t field";
        } else if (!parse_f64(fields[col_x], &record.x)) {
          ok = false;
          error = "bad x field";
        }
      }
    }

    if (ok) {
      const std::int64_t capture =
          capture_known_upfront ? *capture_override : header_capture.value_or(record.t);
      if (record.user.empty() || record.item.empty()) {
        ok = false;
        error = "empty user or item id";
      } else if (!std::isfinite(record.x) || record.x < 0.0) {
        ok = false;
        error = "attention must be a finite nonnegative number";
      } else if ((capture_known_upfront || header_capture) && record.t > capture) {
        ok = false;
        error = "timestamp after capture_time";
      } else if (!seen_items.insert(record.item).second) {
        ok = false;
        error = "duplicate item id '" + record.item + "'";
      } else if (!seen_user_times.insert(record.user + '\x1f' + std::to_string(record.t))
                      .second) {
        ok = false;
        error = "duplicate (user, timestamp) pair";
      }
    }

    if (!ok) {
      add_issue(report, line_no, error);
      continue;
    }
    ++report->parsed;
    log.records.push_back(std::move(record));
  }

  if (capture_override) {
    log.capture_time = *capture_override;
  } else if (header_capture) {
    log.capture_time = *header_capture;
  } else {
    throw IoError("event log is missing capture_time (no header line, none supplied)");
  }
  if (data_lines > 0 &&
      static_cast<double>(report->malformed) > 0.01 * static_cast<double>(data_lines)) {
    std::string detail = report->issues.empty()
                             ? std::string("")
                             : " (line " + std::to_string(report->issues.front().line) + ": " +
                                   report->issues.front().message + ")";
    throw IoError("event log has >1% malformed lines: " + std::to_string(report->malformed) +
                  " of " + std::to_string(data_lines) + detail);
  }
  return log;
}

namespace {

LogFormat format_from_extension(const std::string& path, LogFormat fallback) {
  const std::size_t dot = path.rfind('.');
  if (dot == std::string::npos) return fallback;
  const std::string ext = path.substr(dot + 1);
  if (ext == "csv") return LogFormat::kCsv;
  if (ext == "jsonl" || ext == "ndjson" || ext == "json") return LogFormat::kJsonLines;
  return fallback;
}

}  // namespace

EventLog read_event_log(const std::string& path, LogFormat format,
                        std::optional<std::int64_t> capture_override, ParseReport* report) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open event log: " + path);
  if (format == LogFormat::kAuto) format = format_from_extension(path, LogFormat::kAuto);
  return parse_event_log(in, format, capture_override, report);
}

void write_event_log(const EventLog& log, std::ostream& out, LogFormat format) {
  if (format == LogFormat::kAuto) format = LogFormat::kJsonLines;
  out << "#capture_time=" << log.capture_time << "\n";
  if (format == LogFormat::kCsv) {
    out << "user,item,t,x\n";
    for (const auto& r : log.records) {
      out << r.user << ',' << r.item << ',' << r.t << ',' << format_g17(r.x) << "\n";
    }
    return;
  }
  for (const auto& r : log.records) {
    const json j{{"user", r.user}, {"item", r.item}, {"t", r.t}, {"x", r.x}};
    out << j.dump() << "\n";
  }
}

void write_event_log(const EventLog& log, const std::string& path, LogFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write event log: " + path);
  write_event_log(log, out, format_from_extension(path, format));
  out.flush();
  if (!out) throw IoError("write failed: " + path);
}

std::string serialize_event_log(const EventLog& log, LogFormat format) {
  std::ostringstream out;
  write_event_log(log, out, format);
  return std::move(out).str();
}

FanSnapshot read_fan_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open fan snapshot: " + path);
  FanSnapshot snap;
  bool saw_time = false;
  bool saw_header = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    if (stripped[0] == '#') {
      constexpr std::string_view kKey = "#snapshot_time=";
      if (stripped.rfind(kKey, 0) == 0) {
        if (!parse_i64(stripped.substr(kKey.size()), &snap.snapshot_time)) {
          throw IoError(path + ":" + std::to_string(line_no) + ": bad #snapshot_time header");
        }
        saw_time = true;
      }
      continue;
    }
    if (!saw_header) {
      if (stripped != "user,fans") {
        throw IoError(path + ":" + std::to_string(line_no) + ": expected 'user,fans' header");
      }
      saw_header = true;
      continue;
    }
    const auto fields = split_csv(stripped);
    std::int64_t fans = 0;
    if (fields.size() != 2 || fields[0].empty() || !parse_i64(fields[1], &fans) || fans < 0) {
      throw IoError(path + ":" + std::to_string(line_no) + ": bad snapshot row");
    }
    snap.entries[fields[0]] = static_cast<std::uint64_t>(fans);
  }
  if (!saw_time) throw IoError(path + ": missing #snapshot_time header");
  return snap;
}

void write_fan_snapshot(const FanSnapshot& snap, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write fan snapshot: " + path);
  out << "#snapshot_time=" << snap.snapshot_time << "\n";
  out << "user,fans\n";
  std::vector<std::pair<std::string, std::uint64_t>> rows(snap.entries.begin(),
                                                          snap.entries.end());
  std::sort(rows.begin(), rows.end());
  for (const auto& [user, fans] : rows) {
    out << user << ',' << fans << "\n";
  }
  out.flush();
  if (!out) throw IoError("write failed: " + path);
}

std::unordered_set<std::string> filter_stopped_users(const EventLog& log, double T_seconds) {
  if (!(T_seconds > 0.0)) throw UsageError("filter_stopped_users: T must be > 0 seconds");
  std::unordered_map<std::string, std::int64_t> last;
  for (const auto& r : log.records) {
    auto [it, inserted] = last.try_emplace(r.user, r.t);
    if (!inserted) it->second = std::max(it->second, r.t);
  }
  const double boundary = static_cast<double>(log.capture_time) - T_seconds;
  std::unordered_set<std::string> stopped;
  for (const auto& [user, t] : last) {
    if (static_cast<double>(t) <= boundary) stopped.insert(user);
  }
  return stopped;
}

std::vector<FanJoinRow> fan_attention_join(const EventLog& log, const FanSnapshot& snap,
                                           const CohortWindow& window,
                                           const std::unordered_set<std::string>* exclude) {
  if (window.end <= window.start) throw UsageError("fan_attention_join: window end <= start");
  if (snap.snapshot_time > window.start) {
    throw UsageError("fan_attention_join: snapshot_time must be <= window.start");
  }

  struct Acc {
    std::uint64_t before = 0;
    std::vector<std::pair<std::int64_t, double>> in_window;
  };
  std::unordered_map<std::string, Acc> users;
  for (const auto& r : log.records) {
    if (exclude != nullptr && exclude->count(r.user)) continue;
    if (r.t < window.start) {
      ++users[r.user].before;
    } else if (r.t < window.end) {
      users[r.user].in_window.emplace_back(r.t, r.x);
    }
  }

  std::vector<FanJoinRow> rows;
  for (auto& [user, acc] : users) {
    if (acc.in_window.empty()) continue;
    std::sort(acc.in_window.begin(), acc.in_window.end());
    FanJoinRow row;
    row.user = user;
    row.past_productivity = acc.before;
    const auto it = snap.entries.find(user);
    row.fans = it == snap.entries.end() ? 0 : it->second;
    row.attentions.reserve(acc.in_window.size());
    for (const auto& [t, x] : acc.in_window) row.attentions.push_back(x);
    rows.push_back(std::move(row));
  }
  std::sort(rows.begin(), rows.end(),
            [](const FanJoinRow& a, const FanJoinRow& b) { return a.user < b.user; });
  return rows;
}

std::unordered_set<std::string> read_user_list(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open user list: " + path);
  std::unordered_set<std::string> users;
  std::string line;
  while (std::getline(in, line)) {
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    users.insert(stripped);
  }
  return users;
}

}  // namespace attnloop
