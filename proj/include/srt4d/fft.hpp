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

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace srt4d {

constexpr bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// In-place iterative radix-2 DFT, X[k] = sum_n x[n] exp(-2 pi i k n / N),
/// unnormalized. Twiddles are computed in double and stored as T.
template <typename T>
class Fft {
 public:
  explicit Fft(std::size_t n);

  std::size_t size() const { return n_; }
  void forward(std::span<std::complex<T>> data) const;

 private:
  std::size_t n_;
  std::vector<std::size_t> swaps_;   // bit-reversal pairs (i < j)
  std::vector<T> tw_re_;
  std::vector<T> tw_im_;
};

/// The same transform applied to `batch` interleaved signals stored as
/// split real/imaginary planes, element (i, b) at i * batch + b. Every
/// butterfly runs across the whole batch, which vectorizes well.
class BatchedFft {
 public:
  explicit BatchedFft(std::size_t n);

  std::size_t size() const { return n_; }
  void forward(float* re, float* im, std::size_t batch) const;

 private:
  std::size_t n_;
  std::vector<std::size_t> swaps_;
  std::vector<float> tw_re_;
  std::vector<float> tw_im_;
};

extern template class Fft<float>;
extern template class Fft<double>;

}  // namespace srt4d
