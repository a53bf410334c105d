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
#include <span>
#include <vector>

#include "srt4d/dense_tensor.hpp"
#include "srt4d/grid.hpp"

namespace srt4d {

/// Sensor frame: x forward, y left, z up. Azimuth is measured in the xy-plane
/// from +x, elevation from the xy-plane.
struct PolarPoint {
  double range = 0.0;
  double azimuth = 0.0;
  double elevation = 0.0;
};

PolarPoint cart_to_polar(const Vec3& p);
Vec3 polar_to_cart(const PolarPoint& p);

enum class Interpolation { kTrilinear, kNearest };

/// Doppler-reduced power resampled onto the RoI voxel grid. Voxels outside
/// the polar coverage hold 0 and are flagged invalid.
class CartesianField {
 public:
  CartesianField() = default;
  /// Throws if the tensor shape, mask length, or invalid-voxel values are
  /// inconsistent with `roi`.
  CartesianField(CartesianRoi roi, DenseTensorD values, std::vector<std::uint8_t> valid);

  const CartesianRoi& roi() const { return roi_; }
  const VoxelCount& counts() const { return counts_; }
  const DenseTensorD& values() const { return values_; }
  std::span<const std::uint8_t> valid() const { return valid_; }
  std::size_t valid_count() const { return valid_count_; }

 private:
  CartesianRoi roi_;
  VoxelCount counts_;
  DenseTensorD values_;
  std::vector<std::uint8_t> valid_;
  std::size_t valid_count_ = 0;
};

/// True if `p` lies inside the physical extent of every axis of the grid
/// (range, azimuth, elevation; closed intervals).
bool covers(const PolarGrid4D& grid, const PolarPoint& p);

/// Fraction of RoI voxels whose centers the grid covers.
double coverage_fraction(const PolarGrid4D& grid, const CartesianRoi& roi);

/// Source taps for every covered voxel of a (grid, roi) pair, computed once
/// and reused for every frame on that geometry.
class ResamplePlan {
 public:
  struct Tap {
    std::uint32_t voxel;   // linear RoI voxel index
    std::uint32_t base;    // flat polar index of the lower corner
    std::uint32_t d_range; // flat offset to the upper neighbour, 0 if clamped
    std::uint32_t d_azimuth;
    std::uint32_t d_elevation;
    double f_range;        // interpolation fractions in [0, 1)
    double f_azimuth;
    double f_elevation;
  };

  ResamplePlan(const PolarGrid4D& grid, const CartesianRoi& roi,
               Interpolation mode = Interpolation::kTrilinear);

  const PolarGrid4D& grid() const { return grid_; }
  const CartesianRoi& roi() const { return roi_; }
  const VoxelCount& counts() const { return counts_; }
  Interpolation mode() const { return mode_; }
  std::span<const Tap> taps() const { return taps_; }
  std::span<const std::uint8_t> valid() const { return valid_; }
  std::size_t valid_count() const { return taps_.size(); }

  /// Gathers from a (R, A, E) polar tensor. OpenMP-parallel over taps.
  CartesianField apply(const DenseTensorD& polar) const;
  /// Single-threaded reference, bit-identical to apply().
  CartesianField apply_serial(const DenseTensorD& polar) const;

 private:
  void check_input(const DenseTensorD& polar) const;

  PolarGrid4D grid_;
  CartesianRoi roi_;
  VoxelCount counts_;
  Interpolation mode_;
  std::vector<Tap> taps_;
  std::vector<std::uint8_t> valid_;
};

/// One-shot convenience: builds a plan and applies it.
CartesianField resample(const DenseTensorD& polar, const PolarGrid4D& grid,
                        const CartesianRoi& roi,
                        Interpolation mode = Interpolation::kTrilinear);

}  // namespace srt4d
