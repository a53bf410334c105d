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
#include <numbers>

namespace srt4d {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Vec3&, const Vec3&) = default;
};

/// Uniformly spaced bins. Bin i covers [start + i*step, start + (i+1)*step)
/// and is represented by its center start + (i + 0.5)*step.
struct AxisSpec {
  std::size_t count = 1;
  double start = 0.0;
  double step = 1.0;

  double center(std::size_t i) const {
    return start + (static_cast<double>(i) + 0.5) * step;
  }
  double lower() const { return start; }
  double upper() const { return start + static_cast<double>(count) * step; }
  double first_center() const { return center(0); }
  double last_center() const { return center(count - 1); }

  /// Index of the bin containing `value`, clamped to [0, count).
  std::size_t nearest_bin(double value) const;

  /// Throws Error(kInvalidArgument) naming `axis_name` if count/step are bad.
  void validate(const char* axis_name) const;

  friend bool operator==(const AxisSpec&, const AxisSpec&) = default;
};

/// Bin layout of a dense 4D radar tensor, axis order Doppler, range,
/// azimuth, elevation. Units: m/s, m, rad, rad.
struct PolarGrid4D {
  AxisSpec doppler;
  AxisSpec range;
  AxisSpec azimuth;
  AxisSpec elevation;

  void validate() const;

  friend bool operator==(const PolarGrid4D&, const PolarGrid4D&) = default;
};

struct VoxelCount {
  std::size_t nx = 0;
  std::size_t ny = 0;
  std::size_t nz = 0;

  std::size_t total() const { return nx * ny * nz; }
  friend bool operator==(const VoxelCount&, const VoxelCount&) = default;
};

struct VoxelIndex {
  std::size_t ix = 0;
  std::size_t iy = 0;
  std::size_t iz = 0;

  friend bool operator==(const VoxelIndex&, const VoxelIndex&) = default;
};

/// Axis-aligned box with cubic voxels of edge `voxel`.
struct CartesianRoi {
  Vec3 min;
  Vec3 max;
  double voxel = 0.4;

  friend bool operator==(const CartesianRoi&, const CartesianRoi&) = default;
};

/// x 0..72 m, y -16..16 m, z -2..7.6 m at 0.4 m. A convenient default, not a
/// sensor constant.
CartesianRoi default_roi();

/// floor((max - min) / voxel) per axis. Quotients within 1e-10 of the next
/// integer snap up, so decimal extents such as 9.6 / 0.4 give 24.
/// Throws kDegenerateRoi if any axis ends up with zero voxels or the box is
/// not well formed.
VoxelCount voxel_count(const CartesianRoi& roi);

/// min + (index + 0.5) * voxel per axis. Throws kOutOfRange.
Vec3 voxel_center(const CartesianRoi& roi, VoxelIndex index);

/// Row-major linear index (z fastest).
inline std::size_t linear_index(const VoxelCount& n, VoxelIndex i) {
  return (i.ix * n.ny + i.iy) * n.nz + i.iz;
}

inline VoxelIndex unravel(const VoxelCount& n, std::size_t linear) {
  VoxelIndex i;
  i.iz = linear % n.nz;
  linear /= n.nz;
  i.iy = linear % n.ny;
  i.ix = linear / n.ny;
  return i;
}

}  // namespace srt4d
