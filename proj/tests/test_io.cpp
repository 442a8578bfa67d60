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

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>

#include <doctest.h>
#include <json.hpp>

#include "attnloop/errors.hpp"
#include "attnloop/version.hpp"

using namespace attnloop;

TEST_CASE("sha256 matches the published test vectors") {
  CHECK(sha256_hex("") ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("The quick brown fox jumps over the lazy dog") ==
        "d7a8fbb307d7809469ca9abcb0082e4f8d5651e46d3cdb762d02d0bf37c9e592");
}

TEST_CASE("g17 formatting round-trips doubles exactly") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 5000; ++i) {
    double v = unit(rng) * std::pow(10.0, static_cast<int>(rng() % 41) - 20);
    if (rng() % 2) v = -v;
    const std::string s = format_g17(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
  CHECK(std::strtod(format_g17(0.1).c_str(), nullptr) == 0.1);
}

TEST_CASE("series render to CSV with a header row and exact numbers") {
  Series s;
  s.name = "demo";
  s.label_header = "n";
  s.value_header = "hazard";
  s.count_header = "at_risk";
  s.labels = {"1", "2"};
  s.values = {0.5, 0.1};
  s.counts = {100, 50};
  CHECK(series_to_csv(s) == "n,hazard,at_risk\n1,0.5,100\n2,0.10000000000000001,50\n");

  Series with_extras = s;
  with_extras.extras = {{"lo", {0.0, 1.0}}, {"hi", {1.0, 2.0}}};
  const std::string csv = series_to_csv(with_extras);
  CHECK(csv.find("n,lo,hi,hazard,at_risk\n") == 0);
}

TEST_CASE("reports assemble a single JSON object") {
  Report report("hazard");
  report.add_option("log", std::string("events.jsonl"));
  report.add_option("T_months", 3.0);
  report.add_scalar("p_hat", 0.6321205588285577);
  Series s;
  s.name = "hazard";
  s.labels = {"1"};
  s.values = {0.25};
  s.counts = {4};
  report.add_series(s);

  const auto j = nlohmann::json::parse(report.to_json());
  CHECK(j.at("analysis") == "hazard");
  CHECK(j.at("options").at("T_months") == 3.0);
  CHECK(j.at("scalars").at("p_hat").get<double>() == 0.6321205588285577);
  CHECK(j.at("series").at("hazard").at("value")[0] == 0.25);
  CHECK(j.at("series").at("hazard").at("count")[0] == 4);
}

TEST_CASE("manifests round-trip and default their version and timestamp") {
  RunManifest m;
  m.subcommand = "simulate";
  m.config_digest = "deadbeef";
  m.master_seed = 0xfeedfacecafebeefull;
  m.n_cap_used = 100000;
  const std::string path = "test_manifest_roundtrip.json";
  write_manifest(m, path);
  const auto loaded = read_manifest(path);
  CHECK(loaded.subcommand == "simulate");
  CHECK(loaded.config_digest == "deadbeef");
  CHECK(loaded.master_seed == m.master_seed);
  CHECK(loaded.n_cap_used == 100000);
  CHECK(loaded.tool_version == std::string(attnloop::kVersion));
  CHECK(loaded.timestamp > 0);
  std::remove(path.c_str());
}

TEST_CASE("file helpers surface IO failures as IoError") {
  CHECK_THROWS_AS((void)read_text_file("no/such/file.txt"), IoError);
  CHECK_THROWS_AS(write_text_file("no/such/dir/file.txt", "x"), IoError);
  CHECK_THROWS_AS((void)sha256_file("no/such/file.txt"), IoError);
}
