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

#include "srt4d/doppler.hpp"

#include <algorithm>
#include <array>
#include <string>
#include <vector>

#include "srt4d/error.hpp"

namespace srt4d {

void check_shape_against_grid(const std::vector<std::size_t>& shape, const PolarGrid4D& grid,
                              bool with_doppler) {
  std::vector<std::pair<const char*, std::size_t>> expected;
  if (with_doppler) expected.emplace_back("doppler", grid.doppler.count);
  expected.emplace_back("range", grid.range.count);
  expected.emplace_back("azimuth", grid.azimuth.count);
  expected.emplace_back("elevation", grid.elevation.count);

  if (shape.size() != expected.size()) {
    fail(ErrorKind::kShapeMismatch, "tensor rank " + std::to_string(shape.size()) +
                                        " does not match grid rank " +
                                        std::to_string(expected.size()));
  }
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (shape[i] != expected[i].second) {
      fail(ErrorKind::kShapeMismatch, std::string(expected[i].first) + " axis has " +
                                          std::to_string(shape[i]) + " bins, grid expects " +
                                          std::to_string(expected[i].second));
    }
  }
}

namespace {

std::vector<std::size_t> reduced_shape(const DenseTensorF& tensor, const PolarGrid4D& grid) {
  check_shape_against_grid(tensor.shape(), grid, /*with_doppler=*/true);
  if (tensor.shape()[0] < 1) fail(ErrorKind::kShapeMismatch, "doppler axis is empty");
  return {tensor.shape()[1], tensor.shape()[2], tensor.shape()[3]};
}

constexpr std::size_t kCellBlock = 4096;

}  // namespace

DenseTensorD reduce_doppler(const DenseTensorF& tensor, const PolarGrid4D& grid) {
  DenseTensorD out(reduced_shape(tensor, grid));
  const std::size_t bins = tensor.shape()[0];
  const std::size_t cells = out.size();
  const std::size_t blocks = (cells + kCellBlock - 1) / kCellBlock;
  const float* src = tensor.values().data();
  double* dst = out.mutable_values().data();
  const double inv = 1.0 / static_cast<double>(bins);

#pragma omp parallel for schedule(static)
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t begin = b * kCellBlock;
    const std::size_t len = std::min(kCellBlock, cells - begin);
    std::array<double, kCellBlock> acc{};
    for (std::size_t d = 0; d < bins; ++d) {
      const float* slab = src + d * cells + begin;
      for (std::size_t c = 0; c < len; ++c) acc[c] += static_cast<double>(slab[c]);
    }
    for (std::size_t c = 0; c < len; ++c) dst[begin + c] = acc[c] * inv;
  }
  return out;
}

DenseTensorD reduce_doppler_serial(const DenseTensorF& tensor, const PolarGrid4D& grid) {
  DenseTensorD out(reduced_shape(tensor, grid));
  const std::size_t bins = tensor.shape()[0];
  const std::size_t cells = out.size();
  auto src = tensor.values();
  auto dst = out.mutable_values();
  for (std::size_t d = 0; d < bins; ++d) {
    for (std::size_t c = 0; c < cells; ++c) dst[c] += static_cast<double>(src[d * cells + c]);
  }
  const double inv = 1.0 / static_cast<double>(bins);
  for (double& v : dst) v *= inv;
  return out;
}

}  // namespace srt4d
