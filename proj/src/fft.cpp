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

#include "srt4d/fft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "srt4d/error.hpp"

namespace srt4d {

namespace {

template <typename T>
void make_plan(std::size_t n, std::vector<std::size_t>& swaps, std::vector<T>& tw_re,
               std::vector<T>& tw_im) {
  if (!is_power_of_two(n)) {
    fail(ErrorKind::kInvalidArgument, "fft size " + std::to_string(n) + " is not a power of two");
  }
  std::size_t bits = 0;
  while ((std::size_t{1} << bits) < n) ++bits;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t j = 0;
    for (std::size_t b = 0; b < bits; ++b) j |= ((i >> b) & 1u) << (bits - 1 - b);
    if (i < j) {
      swaps.push_back(i);
      swaps.push_back(j);
    }
  }
  tw_re.resize(n / 2);
  tw_im.resize(n / 2);
  for (std::size_t k = 0; k < n / 2; ++k) {
    const double a = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    tw_re[k] = static_cast<T>(std::cos(a));
    tw_im[k] = static_cast<T>(std::sin(a));
  }
}

}  // namespace

template <typename T>
Fft<T>::Fft(std::size_t n) : n_(n) {
  make_plan(n, swaps_, tw_re_, tw_im_);
}

template <typename T>
void Fft<T>::forward(std::span<std::complex<T>> data) const {
  if (data.size() != n_) {
    fail(ErrorKind::kShapeMismatch, "fft input length " + std::to_string(data.size()) +
                                        " does not match plan size " + std::to_string(n_));
  }
  for (std::size_t s = 0; s < swaps_.size(); s += 2) std::swap(data[swaps_[s]], data[swaps_[s + 1]]);

  // std::complex<T> is layout-compatible with T[2].
  T* x = reinterpret_cast<T*>(data.data());
  for (std::size_t half = 1; half < n_; half *= 2) {
    const std::size_t tw_stride = n_ / (2 * half);
    for (std::size_t start = 0; start < n_; start += 2 * half) {
      for (std::size_t k = 0; k < half; ++k) {
        const T wr = tw_re_[k * tw_stride];
        const T wi = tw_im_[k * tw_stride];
        T* a = x + 2 * (start + k);
        T* b = x + 2 * (start + k + half);
        const T br = b[0] * wr - b[1] * wi;
        const T bi = b[0] * wi + b[1] * wr;
        b[0] = a[0] - br;
        b[1] = a[1] - bi;
        a[0] += br;
        a[1] += bi;
      }
    }
  }
}

BatchedFft::BatchedFft(std::size_t n) : n_(n) { make_plan(n, swaps_, tw_re_, tw_im_); }

void BatchedFft::forward(float* re, float* im, std::size_t batch) const {
  for (std::size_t s = 0; s < swaps_.size(); s += 2) {
    std::swap_ranges(re + swaps_[s] * batch, re + (swaps_[s] + 1) * batch, re + swaps_[s + 1] * batch);
    std::swap_ranges(im + swaps_[s] * batch, im + (swaps_[s] + 1) * batch, im + swaps_[s + 1] * batch);
  }
  for (std::size_t half = 1; half < n_; half *= 2) {
    const std::size_t tw_stride = n_ / (2 * half);
    for (std::size_t start = 0; start < n_; start += 2 * half) {
      for (std::size_t k = 0; k < half; ++k) {
        const float wr = tw_re_[k * tw_stride];
        const float wi = tw_im_[k * tw_stride];
        float* __restrict ar = re + (start + k) * batch;
        float* __restrict ai = im + (start + k) * batch;
        float* __restrict br = re + (start + k + half) * batch;
        float* __restrict bi = im + (start + k + half) * batch;
#pragma omp simd
        for (std::size_t j = 0; j < batch; ++j) {
          const float tr = br[j] * wr - bi[j] * wi;
          const float ti = br[j] * wi + bi[j] * wr;
          br[j] = ar[j] - tr;
          bi[j] = ai[j] - ti;
          ar[j] += tr;
          ai[j] += ti;
        }
      }
    }
  }
}

template class Fft<float>;
template class Fft<double>;

}  // namespace srt4d
