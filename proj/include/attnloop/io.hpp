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
// Output plumbing: tabular series as CSV, combined JSON reports, SHA-256
// digests and the per-run manifest. All numbers are serialized with 17
// significant digits so doubles round-trip exactly.

#ifndef ATTNLOOP_IO_HPP_
#define ATTNLOOP_IO_HPP_

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "attnloop/estimators.hpp"

namespace attnloop {

std::string format_g17(double v);

// One labeled output table: label column, optional numeric extra columns,
// a value column and an optional count column.
struct Series {
  std::string name;
  std::string label_header = "label";
  std::vector<std::string> labels;
  struct Extra {
    std::string header;
    std::vector<double> values;
  };
  std::vector<Extra> extras;
  std::string value_header = "value";
  std::vector<double> values;
  std::string count_header = "count";
  std::vector<std::uint64_t> counts;  // empty = no count column
};

void write_series_csv(const Series& series, const std::string& path);
std::string series_to_csv(const Series& series);

Series series_from_histogram(const ContributionHistogram& hist);
Series series_from_hazard(const HazardCurve& curve);
Series series_from_ratio(std::string name, std::string label_header, const RatioSeries& ratios);
Series series_from_binned(std::string name, const BinnedMeans& bins,
                          std::string value_header = "mean");

// Accumulates one analysis run into a single JSON object
// {analysis, options, scalars, series}.
class Report {
 public:
  explicit Report(std::string analysis);

  void add_option(const std::string& name, const std::string& value);
  void add_option(const std::string& name, double value);
  void add_option(const std::string& name, std::int64_t value);
  void add_scalar(const std::string& name, double value);
  void add_text(const std::string& name, const std::string& value);
  void add_series(const Series& series);

  std::string to_json() const;
  void write_json(const std::string& path) const;

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
};

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::string& path);

// Reproducibility metadata emitted alongside every output artifact.
struct RunManifest {
  std::string subcommand;
  std::string config_digest;  // SHA-256 hex of the consumed config (or input log)
  std::uint64_t master_seed = 0;
  std::int64_t timestamp = 0;  // emission time, epoch seconds
  std::string tool_version;
  std::int64_t n_cap_used = 0;  // 0 when not applicable
};

void write_manifest(const RunManifest& manifest, const std::string& path);
RunManifest read_manifest(const std::string& path);

void write_text_file(const std::string& path, std::string_view content);
std::string read_text_file(const std::string& path);

}  // namespace attnloop

#endif  // ATTNLOOP_IO_HPP_
