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

#include <cstddef>
#include <cstdint>
#include <vector>

#include "srt4d/grid.hpp"
#include "srt4d/resample.hpp"

namespace srt4d {

struct SparseElement {
  std::uint32_t ix = 0;
  std::uint32_t iy = 0;
  std::uint32_t iz = 0;
  float power = 0.0f;

  friend bool operator==(const SparseElement&, const SparseElement&) = default;
};

/// The retained top-N% voxels of a Cartesian field. Elements are sorted by
/// ascending linear voxel index and their number is fixed by
/// retained_count(density_percent, source_valid_count).
struct SparseRadarTensor {
  CartesianRoi roi;
  double density_percent = 0.0;
  std::uint64_t source_valid_count = 0;
  std::vector<SparseElement> elements;

  /// Total RoI voxels, the alternative pooling denominator.
  std::size_t roi_voxel_count() const { return voxel_count(roi).total(); }

  friend bool operator==(const SparseRadarTensor&, const SparseRadarTensor&) = default;
};

/// Throws kInvalidArgument unless 0 < density_percent <= 100.
void check_density(double density_percent);

/// min(ceil(N/100 * valid_count), valid_count). A product within 1e-9 of an
/// integer counts as that integer, so decimal densities such as 0.01% of
/// 10^4 voxels give exactly 1 rather than 2.
std::uint64_t retained_count(double density_percent, std::uint64_t valid_count);

/// Exact top-N% selection over the valid voxels of `field`. Ties at the
/// selection boundary go to the smaller linear voxel index. Expected linear
/// time (introselect); the output order is by voxel index.
SparseRadarTensor top_percent_pool(const CartesianField& field, double density_percent);

/// Smallest retained power for the same selection.
double selection_threshold(const CartesianField& field, double density_percent);

/// Checks every SparseRadarTensor invariant; throws Error on the first
/// violation.
void validate(const SparseRadarTensor& tensor);

}  // namespace srt4d
