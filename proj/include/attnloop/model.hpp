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
// Stochastic model definitions: multiplicative noise kernels, the attention
// functions of the three model variants, and the threshold stopping rule.
//
// Attention for submission index n by a contributor with `fans` followers:
//   Iid        x = a * y            (every submission faces the same odds)
//   Reinforced x = a * n * y        (attention grows linearly with index)
//   FanLoop    x = (c0 + c1*fans) * y
// where y is multiplicative noise with mean one. A contributor continues
// only while x strictly surpasses the success threshold theta; x == theta
// counts as a stop so the rule is well-defined under Constant noise.

#ifndef ATTNLOOP_MODEL_HPP_
#define ATTNLOOP_MODEL_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "attnloop/rng.hpp"

namespace attnloop {

enum class NoiseFamily { kExponential, kUniformZeroTwo, kLogNormal, kConstant };

// All families are normalized to mean one. Their densities at zero determine
// whether the reinforced model produces a power-law contribution tail:
// Exponential f(0)=1, UniformZeroTwo f(0)=1/2, LogNormal f(0)=0 (the
// degenerate case), Constant is the deterministic benchmark.
struct NoiseKernel {
  NoiseFamily family = NoiseFamily::kExponential;
  // LogNormal takes one parameter (sigma > 0); the other families take none.
  std::vector<double> params;

  void validate() const;
  double sample(RngStream& rng) const;
  // Density of the kernel at 0+, which fixes F'(0) = (theta/a) * density.
  double density_at_zero() const;

  static NoiseKernel exponential() { return {NoiseFamily::kExponential, {}}; }
  static NoiseKernel uniform_zero_two() { return {NoiseFamily::kUniformZeroTwo, {}}; }
  static NoiseKernel log_normal(double sigma) { return {NoiseFamily::kLogNormal, {sigma}}; }
  static NoiseKernel constant() { return {NoiseFamily::kConstant, {}}; }
};

enum class ModelVariant { kIid, kReinforced, kFanLoop };

struct ModelParams {
  ModelVariant variant = ModelVariant::kIid;
  double a = 1.0;      // attention scale
  double theta = 1.0;  // success threshold (global)
  NoiseKernel noise;
  double c0 = 0.0;  // FanLoop: base audience size
  double c1 = 0.0;  // FanLoop: attention per fan
  double c2 = 0.0;  // FanLoop: fan conversion probability
  std::uint64_t n_cap = 100000;      // hard cap on contributions per user
  double gap_mean_seconds = 86400;  // mean inter-submission time

  void validate() const;

  // Flat `key = value` config, keys: variant, a, theta, noise.family,
  // noise.params, c0, c1, c2, n_cap, gap_mean_seconds.
  static ModelParams from_config(std::string_view text);
  static ModelParams load(const std::string& path);
  std::string to_config() const;
};

struct AttentionSample {
  std::uint64_t index = 0;        // submission index n, 1-based
  std::uint64_t fans_before = 0;  // fan count when the submission was made
  double attention = 0.0;         // realized attention x
};

const char* to_string(ModelVariant v);
const char* to_string(NoiseFamily f);

// One noise draw y (mean one, strictly positive).
double sample_noise(const NoiseKernel& kernel, RngStream& rng);

// Expected-attention law of the chosen variant evaluated at one draw.
double attention_of(const ModelParams& params, std::uint64_t n, std::uint64_t fans, double y);

// True means the contributor stops: continuing requires x to strictly
// surpass theta.
inline bool stop_decision(double x, double theta) { return x <= theta; }

}  // namespace attnloop

#endif  // ATTNLOOP_MODEL_HPP_
