// Copyright 2026 The srt4d Authors
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

#include "srt4d/noise.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace srt4d {

namespace {

constexpr float kLn2 = 0.693147180559945309f;
constexpr float kTwoPi = 6.28318530717958648f;

inline float neg_log_unit_inline(float u) {
  // u = m * 2^e with m in [sqrt(1/2), sqrt(2)); branch-free so loops over it
  // vectorize.
  constexpr std::int32_t kSqrtHalfBits = 0x3f3504f3;
  const auto bits = std::bit_cast<std::int32_t>(u);
  const std::int32_t e = (bits - kSqrtHalfBits) >> 23;
  const float m = std::bit_cast<float>(bits - (e * (1 << 23)));
  // ln(m) = 2 atanh(t), t = (m - 1) / (m + 1), |t| < 0.172
  const float t = (m - 1.0f) / (m + 1.0f);
  const float t2 = t * t;
  const float series =
      1.0f + t2 * (1.0f / 3.0f + t2 * (1.0f / 5.0f + t2 * (1.0f / 7.0f + t2 * (1.0f / 9.0f))));
  return -(static_cast<float>(e) * kLn2 + 2.0f * t * series);
}

inline float select_bits(std::int32_t mask, float if_set, float if_clear) {
  return std::bit_cast<float>((std::bit_cast<std::int32_t>(if_set) & mask) |
                              (std::bit_cast<std::int32_t>(if_clear) & ~mask));
}

inline void sincos_turns_inline(float turns, float& s, float& c) {
  // Reduce to x in [-pi/4, pi/4] plus a quarter-turn count q.
  const float r = turns - std::floor(turns + 0.5f);
  const float qf = std::floor(4.0f * r + 0.5f);
  const float x = kTwoPi * (r - 0.25f * qf);
  const float x2 = x * x;
  const float sx =
      x * (1.0f + x2 * (-1.0f / 6.0f + x2 * (1.0f / 120.0f + x2 * (-1.0f / 5040.0f))));
  const float cx =
      1.0f + x2 * (-0.5f + x2 * (1.0f / 24.0f + x2 * (-1.0f / 720.0f + x2 * (1.0f / 40320.0f))));
  // Rotate by q quarter turns.
  const std::int32_t q = static_cast<std::int32_t>(qf) & 3;
  const std::int32_t odd = -(q & 1);
  const auto s_sign = static_cast<float>(1 - 2 * ((q >> 1) & 1));
  const auto c_sign = static_cast<float>(1 - 2 * (((q + 1) >> 1) & 1));
  s = s_sign * select_bits(odd, cx, sx);
  c = c_sign * select_bits(odd, sx, cx);
}

constexpr std::size_t kLanes = 16;

}  // namespace

float neg_log_unit(float u) { return neg_log_unit_inline(u); }

void sincos_turns(float turns, float& s, float& c) { sincos_turns_inline(turns, s, c); }

void fill_complex_gaussian(Philox4x32::Key key, std::uint32_t stream, std::uint64_t first_pair,
                           std::size_t pairs, float variance, float* re, float* im) {
  constexpr std::uint32_t kM0 = 0xD2511F53u, kM1 = 0xCD9E8D57u;
  constexpr std::uint32_t kW0 = 0x9E3779B9u, kW1 = 0xBB67AE85u;
  constexpr float kScale = 1.0f / 16777216.0f;
  const float sigma = std::sqrt(variance);

  for (std::size_t base = 0; base < pairs; base += kLanes) {
    const std::size_t lanes = std::min(kLanes, pairs - base);
    // Philox4x32-10, one lane per counter; mirrors Philox4x32::generate.
    std::uint32_t c0[kLanes], c1[kLanes], c2[kLanes], c3[kLanes];
    for (std::size_t i = 0; i < kLanes; ++i) {
      const std::uint64_t ctr = first_pair + base + i;
      c0[i] = static_cast<std::uint32_t>(ctr);
      c1[i] = stream;
      c2[i] = static_cast<std::uint32_t>(ctr >> 32);
      c3[i] = 0;
    }
    std::uint32_t k0 = key[0], k1 = key[1];
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        k0 += kW0;
        k1 += kW1;
      }
#pragma omp simd
      for (std::size_t i = 0; i < kLanes; ++i) {
        const std::uint64_t p0 = std::uint64_t{kM0} * c0[i];
        const std::uint64_t p1 = std::uint64_t{kM1} * c2[i];
        const auto n0 = static_cast<std::uint32_t>(p1 >> 32) ^ c1[i] ^ k0;
        const auto n2 = static_cast<std::uint32_t>(p0 >> 32) ^ c3[i] ^ k1;
        c1[i] = static_cast<std::uint32_t>(p1);
        c3[i] = static_cast<std::uint32_t>(p0);
        c0[i] = n0;
        c2[i] = n2;
      }
    }
    // Words (0, 1) feed sample 2i and words (2, 3) sample 2i + 1.
    float u_r[2 * kLanes], u_a[2 * kLanes];
    for (std::size_t i = 0; i < kLanes; ++i) {
      u_r[2 * i] = (static_cast<float>(c0[i] >> 8) + 1.0f) * kScale;
      u_a[2 * i] = (static_cast<float>(c1[i] >> 8) + 1.0f) * kScale;
      u_r[2 * i + 1] = (static_cast<float>(c2[i] >> 8) + 1.0f) * kScale;
      u_a[2 * i + 1] = (static_cast<float>(c3[i] >> 8) + 1.0f) * kScale;
    }
    float out_re[2 * kLanes], out_im[2 * kLanes];
#pragma omp simd
    for (std::size_t i = 0; i < 2 * kLanes; ++i) {
      const float radius = sigma * std::sqrt(neg_log_unit_inline(u_r[i]));
      float sn, cs;
      sincos_turns_inline(u_a[i], sn, cs);
      out_re[i] = radius * cs;
      out_im[i] = radius * sn;
    }
    std::copy_n(out_re, 2 * lanes, re + 2 * base);
    std::copy_n(out_im, 2 * lanes, im + 2 * base);
  }
}

}  // namespace srt4d
