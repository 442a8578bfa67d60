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

#include "attnloop/io.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <ctime>
#include <fstream>
#include <memory>
#include <sstream>

#include <json.hpp>

#include "attnloop/errors.hpp"
#include "attnloop/version.hpp"

namespace attnloop {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string series_to_csv(const Series& series) {
  std::ostringstream out;
  out << series.label_header;
  for (const auto& extra : series.extras) out << ',' << extra.header;
  out << ',' << series.value_header;
  if (!series.counts.empty()) out << ',' << series.count_header;
  out << "\n";
  for (std::size_t i = 0; i < series.values.size(); ++i) {
    out << series.labels[i];
    for (const auto& extra : series.extras) out << ',' << format_g17(extra.values[i]);
    out << ',' << format_g17(series.values[i]);
    if (!series.counts.empty()) out << ',' << series.counts[i];
    out << "\n";
  }
  return std::move(out).str();
}

void write_series_csv(const Series& series, const std::string& path) {
  write_text_file(path, series_to_csv(series));
}

Series series_from_histogram(const ContributionHistogram& hist) {
  Series s;
  s.name = "distribution";
  s.label_header = "n";
  s.value_header = "users";
  for (const auto& [n, count] : hist.counts) {
    s.labels.push_back(std::to_string(n));
    s.values.push_back(static_cast<double>(count));
  }
  return s;
}

Series series_from_hazard(const HazardCurve& curve) {
  Series s;
  s.name = "hazard";
  s.label_header = "n";
  s.value_header = "hazard";
  s.count_header = "at_risk";
  for (std::size_t i = 0; i < curve.n.size(); ++i) {
    s.labels.push_back(std::to_string(curve.n[i]));
    s.values.push_back(curve.h[i]);
    s.counts.push_back(curve.at_risk[i]);
  }
  return s;
}

Series series_from_ratio(std::string name, std::string label_header, const RatioSeries& ratios) {
  Series s;
  s.name = std::move(name);
  s.label_header = std::move(label_header);
  s.value_header = "ratio";
  s.labels = ratios.labels;
  s.values = ratios.values;
  s.counts = ratios.counts;
  return s;
}

Series series_from_binned(std::string name, const BinnedMeans& bins, std::string value_header) {
  Series s;
  s.name = std::move(name);
  s.label_header = "bin";
  s.value_header = std::move(value_header);
  s.extras.resize(3);
  s.extras[0].header = "lo";
  s.extras[1].header = "hi";
  s.extras[2].header = "mean_key";
  for (const auto& row : bins.rows) {
    s.labels.push_back(std::to_string(row.bin));
    s.extras[0].values.push_back(row.lo);
    s.extras[1].values.push_back(row.hi);
    s.extras[2].values.push_back(row.mean_key);
    s.values.push_back(row.mean);
    s.counts.push_back(row.count);
  }
  return s;
}

struct Report::Impl {
  ordered_json root;
};

Report::Report(std::string analysis) : impl_(std::make_shared<Impl>()) {
  impl_->root["analysis"] = std::move(analysis);
  impl_->root["options"] = ordered_json::object();
  impl_->root["scalars"] = ordered_json::object();
  impl_->root["series"] = ordered_json::object();
}

void Report::add_option(const std::string& name, const std::string& value) {
  impl_->root["options"][name] = value;
}
void Report::add_option(const std::string& name, double value) {
  impl_->root["options"][name] = value;
}
void Report::add_option(const std::string& name, std::int64_t value) {
  impl_->root["options"][name] = value;
}
void Report::add_scalar(const std::string& name, double value) {
  impl_->root["scalars"][name] = value;
}
void Report::add_text(const std::string& name, const std::string& value) {
  impl_->root["scalars"][name] = value;
}

void Report::add_series(const Series& series) {
  ordered_json s;
  s["labels"] = series.labels;
  for (const auto& extra : series.extras) s[extra.header] = extra.values;
  s[series.value_header] = series.values;
  if (!series.counts.empty()) s[series.count_header] = series.counts;
  impl_->root["series"][series.name] = std::move(s);
}

std::string Report::to_json() const { return impl_->root.dump(2) + "\n"; }

void Report::write_json(const std::string& path) const { write_text_file(path, to_json()); }

std::string sha256_hex(std::string_view bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("sha256 digest failed");
  }
  static const char* kHex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[md[i] >> 4]);
    out.push_back(kHex[md[i] & 0xf]);
  }
  return out;
}

std::string sha256_file(const std::string& path) { return sha256_hex(read_text_file(path)); }

void write_manifest(const RunManifest& manifest, const std::string& path) {
  ordered_json j;
  j["subcommand"] = manifest.subcommand;
  j["config_digest"] = manifest.config_digest;
  j["master_seed"] = manifest.master_seed;
  j["timestamp"] = manifest.timestamp != 0
                       ? manifest.timestamp
                       : static_cast<std::int64_t>(std::time(nullptr));
  j["tool_version"] =
      manifest.tool_version.empty() ? std::string(kVersion) : manifest.tool_version;
  j["n_cap_used"] = manifest.n_cap_used;
  write_text_file(path, j.dump(2) + "\n");
}

RunManifest read_manifest(const std::string& path) {
  const json j = json::parse(read_text_file(path));
  RunManifest m;
  m.subcommand = j.at("subcommand").get<std::string>();
  m.config_digest = j.at("config_digest").get<std::string>();
  m.master_seed = j.at("master_seed").get<std::uint64_t>();
  m.timestamp = j.at("timestamp").get<std::int64_t>();
  m.tool_version = j.at("tool_version").get<std::string>();
  m.n_cap_used = j.at("n_cap_used").get<std::int64_t>();
  return m;
}

void write_text_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write file: " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) throw IoError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

}  // namespace attnloop
