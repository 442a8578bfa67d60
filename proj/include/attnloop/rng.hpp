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
// Counter-based splittable random number generation.
//
// The generator is Philox4x64-10 (Salmon et al., SC'11): a keyed bijection of
// a 256-bit counter producing four 64-bit words per block. Because output is
// a pure function of (key, counter), per-user streams can be addressed
// directly — stream i uses counter word 2 as the stream id and counter word 0
// as the in-stream position — so population runs are reproducible regardless
// of scheduling, and no generator state is ever shared between threads.
//
// The implementation matches numpy.random.Philox word-for-word; the unit
// suite pins five numpy-generated known-answer vectors.

#ifndef ATTNLOOP_RNG_HPP_
#define ATTNLOOP_RNG_HPP_

#include <array>
#include <cmath>
#include <cstdint>

namespace attnloop {

namespace detail {

inline std::uint64_t mulhilo64(std::uint64_t a, std::uint64_t b, std::uint64_t* hi) {
  const unsigned __int128 product = static_cast<unsigned __int128>(a) * b;
  *hi = static_cast<std::uint64_t>(product >> 64);
  return static_cast<std::uint64_t>(product);
}

}  // namespace detail

struct PhiloxBlock {
  std::array<std::uint64_t, 4> counter{0, 0, 0, 0};
  std::array<std::uint64_t, 2> key{0, 0};

  std::array<std::uint64_t, 4> generate() const {
    constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ull;
    constexpr std::uint64_t kMul1 = 0xCA5A826395121157ull;
    constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ull;
    constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73Bull;

    std::array<std::uint64_t, 4> c = counter;
    std::uint64_t k0 = key[0];
    std::uint64_t k1 = key[1];
    for (int round = 0; round < 10; ++round) {
      std::uint64_t hi0;
      const std::uint64_t lo0 = detail::mulhilo64(kMul0, c[0], &hi0);
      std::uint64_t hi1;
      const std::uint64_t lo1 = detail::mulhilo64(kMul1, c[2], &hi1);
      c = {hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0};
      k0 += kWeyl0;
      k1 += kWeyl1;
    }
    return c;
  }
};

// One addressable stream of Philox output with convenience distributions.
// All deviate methods consume a deterministic number of uniform draws, so a
// stream's history is fully described by (master_seed, stream_id, position).
class RngStream {
 public:
  RngStream() : RngStream(0, 0) {}

  RngStream(std::uint64_t master_seed, std::uint64_t stream_id) {
    block_.key = {master_seed, kKeySalt};
    block_.counter = {0, 0, stream_id, 0};
  }

  std::uint64_t next_u64() {
    if (buffer_pos_ == 4) {
      // Pre-increment, matching numpy.random.Philox: block k is generated at
      // counter word 0 == k+1. Carry into word 1 keeps the position lane
      // well-defined even after 2^64 blocks; word 2 is the stream id.
      if (++block_.counter[0] == 0) {
        ++block_.counter[1];
      }
      buffer_ = block_.generate();
      buffer_pos_ = 0;
    }
    return buffer_[buffer_pos_++];
  }

  // Uniform on the open interval (0, 1): 2^52 equispaced points, none of
  // which is 0 or 1, so log() and division by draws are always finite.
  double uniform01() {
    return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1.0p-52;
  }

  // Exponential with the given mean; strictly positive.
  double exponential(double mean) { return -mean * std::log(uniform01()); }

  // Standard normal via Box-Muller (cosine branch only; two uniforms per
  // deviate keeps the draw count fixed).
  double normal01() {
    const double u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

  bool bernoulli(double p) { return uniform01() < p; }

  std::uint64_t binomial(std::uint64_t trials, double p) {
    std::uint64_t successes = 0;
    for (std::uint64_t i = 0; i < trials; ++i) {
      successes += bernoulli(p) ? 1 : 0;
    }
    return successes;
  }

 private:
  static constexpr std::uint64_t kKeySalt = 0x5772B1E9E2C5A4D1ull;
  static constexpr double kPi = 3.14159265358979323846;

  PhiloxBlock block_;
  std::array<std::uint64_t, 4> buffer_{};
  int buffer_pos_ = 4;
};

}  // namespace attnloop

#endif  // ATTNLOOP_RNG_HPP_
