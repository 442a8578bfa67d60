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

#include "attnloop/model.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "attnloop/errors.hpp"

namespace attnloop {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': not a number: '" + value + "'");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    long long v = std::stoll(value, &pos);
    if (pos != value.size() || v < 0) throw std::invalid_argument(value);
    return static_cast<std::uint64_t>(v);
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': not a nonnegative integer: '" + value + "'");
  }
}

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

const char* to_string(ModelVariant v) {
  switch (v) {
    case ModelVariant::kIid: return "iid";
    case ModelVariant::kReinforced: return "reinforced";
    case ModelVariant::kFanLoop: return "fanloop";
  }
  return "?";
}

const char* to_string(NoiseFamily f) {
  switch (f) {
    case NoiseFamily::kExponential: return "exponential";
    case NoiseFamily::kUniformZeroTwo: return "uniform02";
    case NoiseFamily::kLogNormal: return "lognormal";
    case NoiseFamily::kConstant: return "constant";
  }
  return "?";
}

void NoiseKernel::validate() const {
  switch (family) {
    case NoiseFamily::kLogNormal:
      if (params.size() != 1 || !(params[0] > 0.0)) {
        throw ConfigError("config key 'noise.params': lognormal needs one positive sigma");
      }
      break;
    case NoiseFamily::kExponential:
    case NoiseFamily::kUniformZeroTwo:
    case NoiseFamily::kConstant:
      if (!params.empty()) {
        throw ConfigError(std::string("config key 'noise.params': ") + to_string(family) +
                          " takes no parameters");
      }
      break;
  }
}

double NoiseKernel::sample(RngStream& rng) const {
  switch (family) {
    case NoiseFamily::kExponential:
      return rng.exponential(1.0);
    case NoiseFamily::kUniformZeroTwo:
      return 2.0 * rng.uniform01();
    case NoiseFamily::kLogNormal: {
      // mean-one parameterization: E[exp(sigma*Z - sigma^2/2)] = 1
      const double sigma = params[0];
      return std::exp(sigma * rng.normal01() - 0.5 * sigma * sigma);
    }
    case NoiseFamily::kConstant:
      return 1.0;
  }
  throw UsageError("invalid noise family");
}

double NoiseKernel::density_at_zero() const {
  switch (family) {
    case NoiseFamily::kExponential: return 1.0;
    case NoiseFamily::kUniformZeroTwo: return 0.5;
    case NoiseFamily::kLogNormal: return 0.0;
    case NoiseFamily::kConstant: return 0.0;
  }
  return 0.0;
}

void ModelParams::validate() const {
  if (!(a > 0.0)) throw ConfigError("config key 'a': must be > 0");
  if (!(theta > 0.0)) throw ConfigError("config key 'theta': must be > 0");
  noise.validate();
  if (variant == ModelVariant::kFanLoop) {
    if (!(c0 >= 0.0)) throw ConfigError("config key 'c0': must be >= 0");
    if (!(c1 >= 0.0)) throw ConfigError("config key 'c1': must be >= 0");
    if (!(c2 >= 0.0 && c2 <= 1.0)) throw ConfigError("config key 'c2': must be in [0,1]");
  }
  if (n_cap < 1) throw ConfigError("config key 'n_cap': must be >= 1");
  if (!(gap_mean_seconds > 0.0)) throw ConfigError("config key 'gap_mean_seconds': must be > 0");
}

double sample_noise(const NoiseKernel& kernel, RngStream& rng) {
  kernel.validate();
  return kernel.sample(rng);
}

double attention_of(const ModelParams& params, std::uint64_t n, std::uint64_t fans, double y) {
  if (n < 1) throw UsageError("attention_of: submission index must be >= 1");
  switch (params.variant) {
    case ModelVariant::kIid:
      return params.a * y;
    case ModelVariant::kReinforced:
      return params.a * static_cast<double>(n) * y;
    case ModelVariant::kFanLoop:
      return (params.c0 + params.c1 * static_cast<double>(fans)) * y;
  }
  throw UsageError("invalid model variant");
}

ModelParams ModelParams::from_config(std::string_view text) {
  ModelParams p;
  bool saw_variant = false;
  std::map<std::string, std::string> kv;
  std::size_t line_start = 0;
  while (line_start <= text.size()) {
    std::size_t nl = text.find('\n', line_start);
    std::string_view raw =
        text.substr(line_start, nl == std::string_view::npos ? nl : nl - line_start);
    line_start = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line is not 'key = value': '" + line + "'");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("config line has empty key: '" + line + "'");
    if (kv.count(key)) throw ConfigError("config key '" + key + "': duplicated");
    kv[key] = value;
  }

  for (const auto& [key, value] : kv) {
    if (key == "variant") {
      saw_variant = true;
      if (value == "iid") p.variant = ModelVariant::kIid;
      else if (value == "reinforced") p.variant = ModelVariant::kReinforced;
      else if (value == "fanloop") p.variant = ModelVariant::kFanLoop;
      else throw ConfigError("config key 'variant': unknown value '" + value + "'");
    } else if (key == "a") {
      p.a = parse_double(key, value);
    } else if (key == "theta") {
      p.theta = parse_double(key, value);
    } else if (key == "noise.family") {
      if (value == "exponential") p.noise.family = NoiseFamily::kExponential;
      else if (value == "uniform02") p.noise.family = NoiseFamily::kUniformZeroTwo;
      else if (value == "lognormal") p.noise.family = NoiseFamily::kLogNormal;
      else if (value == "constant") p.noise.family = NoiseFamily::kConstant;
      else throw ConfigError("config key 'noise.family': unknown value '" + value + "'");
    } else if (key == "noise.params") {
      p.noise.params.clear();
      std::stringstream ss{value};
      std::string item;
      while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) p.noise.params.push_back(parse_double(key, item));
      }
    } else if (key == "c0") {
      p.c0 = parse_double(key, value);
    } else if (key == "c1") {
      p.c1 = parse_double(key, value);
    } else if (key == "c2") {
      p.c2 = parse_double(key, value);
    } else if (key == "n_cap") {
      p.n_cap = parse_u64(key, value);
    } else if (key == "gap_mean_seconds") {
      p.gap_mean_seconds = parse_double(key, value);
    } else {
      throw ConfigError("config key '" + key + "': unknown key");
    }
  }
  if (!saw_variant) throw ConfigError("config key 'variant': missing");
  p.validate();
  return p;
}

ModelParams ModelParams::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_config(ss.str());
}

std::string ModelParams::to_config() const {
  std::ostringstream out;
  out << "variant = " << to_string(variant) << "\n";
  out << "a = " << format_g17(a) << "\n";
  out << "theta = " << format_g17(theta) << "\n";
  out << "noise.family = " << to_string(noise.family) << "\n";
  out << "noise.params =";
  for (std::size_t i = 0; i < noise.params.size(); ++i) {
    out << (i ? "," : " ") << format_g17(noise.params[i]);
  }
  out << "\n";
  out << "c0 = " << format_g17(c0) << "\n";
  out << "c1 = " << format_g17(c1) << "\n";
  out << "c2 = " << format_g17(c2) << "\n";
  out << "n_cap = " << n_cap << "\n";
  out << "gap_mean_seconds = " << format_g17(gap_mean_seconds) << "\n";
  return std::move(out).str();
}

}  // namespace attnloop
