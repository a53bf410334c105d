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

#include "srt4d/grid.hpp"

#include <cmath>
#include <string>

#include "srt4d/error.hpp"

namespace srt4d {

namespace {

// Absolute tolerance in voxel units; covers decimal extents like 9.6 / 0.4.
constexpr double kSnap = 1e-10;

std::size_t snapped_floor(double q) {
  const double up = std::ceil(q);
  if (up - q <= kSnap) return static_cast<std::size_t>(up);
  return static_cast<std::size_t>(std::floor(q));
}

void check_axis(const char* name, double lo, double hi, double voxel, std::size_t& out) {
  if (!(std::isfinite(lo) && std::isfinite(hi))) {
    fail(ErrorKind::kDegenerateRoi, std::string("roi bound on ") + name + " is not finite");
  }
  if (!(lo < hi)) {
    fail(ErrorKind::kDegenerateRoi, std::string("roi min must be below max on ") + name);
  }
  out = snapped_floor((hi - lo) / voxel);
  if (out == 0) {
    fail(ErrorKind::kDegenerateRoi,
         std::string("voxel larger than roi extent on ") + name);
  }
}

}  // namespace

std::size_t AxisSpec::nearest_bin(double value) const {
  const double pos = std::floor((value - start) / step);
  if (!(pos > 0.0)) return 0;
  if (pos >= static_cast<double>(count)) return count - 1;
  return static_cast<std::size_t>(pos);
}

void AxisSpec::validate(const char* axis_name) const {
  if (count < 1) {
    fail(ErrorKind::kInvalidArgument, std::string(axis_name) + " axis needs at least one bin");
  }
  if (!(std::isfinite(step) && step > 0.0) || !std::isfinite(start)) {
    fail(ErrorKind::kInvalidArgument, std::string(axis_name) + " axis step must be positive");
  }
}

void PolarGrid4D::validate() const {
  using std::numbers::pi;
  doppler.validate("doppler");
  range.validate("range");
  azimuth.validate("azimuth");
  elevation.validate("elevation");
  if (range.start < 0.0) {
    fail(ErrorKind::kInvalidArgument, "range axis must start at or beyond 0 m");
  }
  if (!(azimuth.lower() > -pi) || azimuth.upper() > pi + 1e-12) {
    fail(ErrorKind::kInvalidArgument, "azimuth span must lie within (-pi, pi]");
  }
  if (!(elevation.lower() > -pi / 2) || !(elevation.upper() < pi / 2)) {
    fail(ErrorKind::kInvalidArgument, "elevation span must lie within (-pi/2, pi/2)");
  }
}

CartesianRoi default_roi() {
  return CartesianRoi{{0.0, -16.0, -2.0}, {72.0, 16.0, 7.6}, 0.4};
}

VoxelCount voxel_count(const CartesianRoi& roi) {
  if (!(std::isfinite(roi.voxel) && roi.voxel > 0.0)) {
    fail(ErrorKind::kDegenerateRoi, "voxel size must be positive");
  }
  VoxelCount n;
  check_axis("x", roi.min.x, roi.max.x, roi.voxel, n.nx);
  check_axis("y", roi.min.y, roi.max.y, roi.voxel, n.ny);
  check_axis("z", roi.min.z, roi.max.z, roi.voxel, n.nz);
  return n;
}

Vec3 voxel_center(const CartesianRoi& roi, VoxelIndex index) {
  const VoxelCount n = voxel_count(roi);
  if (index.ix >= n.nx || index.iy >= n.ny || index.iz >= n.nz) {
    fail(ErrorKind::kOutOfRange,
         "voxel index (" + std::to_string(index.ix) + "," + std::to_string(index.iy) + "," +
             std::to_string(index.iz) + ") outside (" + std::to_string(n.nx) + "," +
             std::to_string(n.ny) + "," + std::to_string(n.nz) + ")");
  }
  return {roi.min.x + (static_cast<double>(index.ix) + 0.5) * roi.voxel,
          roi.min.y + (static_cast<double>(index.iy) + 0.5) * roi.voxel,
          roi.min.z + (static_cast<double>(index.iz) + 0.5) * roi.voxel};
}

}  // namespace srt4d
