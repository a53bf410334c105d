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

#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "srt4d/error.hpp"

namespace srt4d {

/// Contiguous row-major (last axis fastest) tensor of nonnegative, finite
/// power values. `T` is float for sensor-rate 4D frames and double for the
/// reduced 3D tensors that feed the resampler.
template <typename T>
class DenseTensor {
 public:
  using value_type = T;

  DenseTensor() = default;

  /// Zero-filled tensor of the given shape.
  explicit DenseTensor(std::vector<std::size_t> shape)
      : shape_(std::move(shape)), values_(element_count(shape_), T{0}) {}

  /// Takes ownership of `values`; throws if the length does not match the
  /// shape or any value is negative or non-finite.
  DenseTensor(std::vector<std::size_t> shape, std::vector<T> values)
      : shape_(std::move(shape)), values_(std::move(values)) {
    if (values_.size() != element_count(shape_)) {
      fail(ErrorKind::kShapeMismatch, "tensor has " + std::to_string(values_.size()) +
                                          " values, shape needs " +
                                          std::to_string(element_count(shape_)));
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (!(values_[i] >= T{0}) || !std::isfinite(values_[i])) {
        fail(ErrorKind::kInvalidArgument,
             "tensor value at flat index " + std::to_string(i) + " is negative or not finite");
      }
    }
  }

  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t size() const { return values_.size(); }

  std::span<const T> values() const { return values_; }
  /// Mutable access for producers. Callers are responsible for keeping values
  /// nonnegative and finite.
  std::span<T> mutable_values() { return values_; }

  std::size_t flat_index(std::span<const std::size_t> index) const {
    if (index.size() != shape_.size()) {
      fail(ErrorKind::kShapeMismatch, "index rank does not match tensor rank");
    }
    std::size_t flat = 0;
    for (std::size_t axis = 0; axis < shape_.size(); ++axis) {
      if (index[axis] >= shape_[axis]) {
        fail(ErrorKind::kOutOfRange, "index " + std::to_string(index[axis]) + " on axis " +
                                         std::to_string(axis) + " exceeds extent " +
                                         std::to_string(shape_[axis]));
      }
      flat = flat * shape_[axis] + index[axis];
    }
    return flat;
  }

  std::vector<std::size_t> multi_index(std::size_t flat) const {
    if (flat >= values_.size()) fail(ErrorKind::kOutOfRange, "flat index past end of tensor");
    std::vector<std::size_t> index(shape_.size());
    for (std::size_t axis = shape_.size(); axis-- > 0;) {
      index[axis] = flat % shape_[axis];
      flat /= shape_[axis];
    }
    return index;
  }

  T at(std::span<const std::size_t> index) const { return values_[flat_index(index)]; }
  T at(std::initializer_list<std::size_t> index) const {
    return at(std::span<const std::size_t>(index.begin(), index.size()));
  }

  static std::size_t element_count(const std::vector<std::size_t>& shape) {
    return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                           std::multiplies<std::size_t>());
  }

 private:
  std::vector<std::size_t> shape_;
  std::vector<T> values_;
};

using DenseTensorF = DenseTensor<float>;
using DenseTensorD = DenseTensor<double>;

}  // namespace srt4d
