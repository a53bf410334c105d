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

#include "srt4d/resample.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "srt4d/doppler.hpp"
#include "srt4d/error.hpp"

namespace srt4d {

PolarPoint cart_to_polar(const Vec3& p) {
  PolarPoint out;
  out.range = std::sqrt(p.x * p.x + p.y * p.y + p.z * p.z);
  out.azimuth = std::atan2(p.y, p.x);
  out.elevation = out.range > 0.0 ? std::asin(std::clamp(p.z / out.range, -1.0, 1.0)) : 0.0;
  return out;
}

Vec3 polar_to_cart(const PolarPoint& p) {
  const double ce = std::cos(p.elevation);
  return {p.range * ce * std::cos(p.azimuth), p.range * ce * std::sin(p.azimuth),
          p.range * std::sin(p.elevation)};
}

CartesianField::CartesianField(CartesianRoi roi, DenseTensorD values,
                               std::vector<std::uint8_t> valid)
    : roi_(roi), counts_(voxel_count(roi)), values_(std::move(values)), valid_(std::move(valid)) {
  const std::vector<std::size_t> expected{counts_.nx, counts_.ny, counts_.nz};
  if (values_.shape() != expected) {
    fail(ErrorKind::kShapeMismatch, "field values do not match the roi voxel counts");
  }
  if (valid_.size() != counts_.total()) {
    fail(ErrorKind::kShapeMismatch, "valid mask length " + std::to_string(valid_.size()) +
                                        " does not match " + std::to_string(counts_.total()) +
                                        " voxels");
  }
  auto v = values_.values();
  for (std::size_t i = 0; i < valid_.size(); ++i) {
    if (valid_[i]) {
      ++valid_count_;
    } else if (v[i] != 0.0) {
      fail(ErrorKind::kInvalidArgument,
           "invalid voxel " + std::to_string(i) + " carries a nonzero value");
    }
  }
}

namespace {

struct AxisTap {
  std::size_t lower;
  bool has_upper;
  double fraction;
};

bool within(const AxisSpec& axis, double value) {
  return value >= axis.lower() && value <= axis.upper();
}

// Position of `value` between bin centers. Between the outermost center and
// the physical edge the axis clamps to that bin.
AxisTap locate(const AxisSpec& axis, double value, Interpolation mode) {
  if (mode == Interpolation::kNearest) return {axis.nearest_bin(value), false, 0.0};
  const double u = (value - axis.start) / axis.step - 0.5;
  const double last = static_cast<double>(axis.count - 1);
  if (!(u > 0.0)) return {0, false, 0.0};
  if (u >= last) return {axis.count - 1, false, 0.0};
  const double lo = std::floor(u);
  return {static_cast<std::size_t>(lo), true, u - lo};
}

}  // namespace

bool covers(const PolarGrid4D& grid, const PolarPoint& p) {
  return within(grid.range, p.range) && within(grid.azimuth, p.azimuth) &&
         within(grid.elevation, p.elevation);
}

double coverage_fraction(const PolarGrid4D& grid, const CartesianRoi& roi) {
  grid.validate();
  const VoxelCount n = voxel_count(roi);
  std::size_t hit = 0;
  for (std::size_t ix = 0; ix < n.nx; ++ix) {
    for (std::size_t iy = 0; iy < n.ny; ++iy) {
      for (std::size_t iz = 0; iz < n.nz; ++iz) {
        if (covers(grid, cart_to_polar(voxel_center(roi, {ix, iy, iz})))) ++hit;
      }
    }
  }
  return static_cast<double>(hit) / static_cast<double>(n.total());
}

ResamplePlan::ResamplePlan(const PolarGrid4D& grid, const CartesianRoi& roi, Interpolation mode)
    : grid_(grid), roi_(roi), counts_(voxel_count(roi)), mode_(mode) {
  grid_.validate();
  constexpr std::size_t kMax = std::numeric_limits<std::uint32_t>::max();
  const std::size_t ra = grid.azimuth.count * grid.elevation.count;
  if (counts_.total() > kMax || grid.range.count * ra > kMax) {
    fail(ErrorKind::kOverflow, "roi or polar grid too large for a resampling plan");
  }
  const auto stride_r = static_cast<std::uint32_t>(ra);
  const auto stride_a = static_cast<std::uint32_t>(grid.elevation.count);

  valid_.assign(counts_.total(), 0);
  for (std::size_t ix = 0; ix < counts_.nx; ++ix) {
    for (std::size_t iy = 0; iy < counts_.ny; ++iy) {
      for (std::size_t iz = 0; iz < counts_.nz; ++iz) {
        const Vec3 c{roi.min.x + (static_cast<double>(ix) + 0.5) * roi.voxel,
                     roi.min.y + (static_cast<double>(iy) + 0.5) * roi.voxel,
                     roi.min.z + (static_cast<double>(iz) + 0.5) * roi.voxel};
        const PolarPoint p = cart_to_polar(c);
        if (!covers(grid, p)) continue;
        const AxisTap r = locate(grid.range, p.range, mode);
        const AxisTap a = locate(grid.azimuth, p.azimuth, mode);
        const AxisTap e = locate(grid.elevation, p.elevation, mode);
        const std::size_t voxel = linear_index(counts_, {ix, iy, iz});
        valid_[voxel] = 1;
        taps_.push_back(Tap{
            static_cast<std::uint32_t>(voxel),
            static_cast<std::uint32_t>((r.lower * grid.azimuth.count + a.lower) *
                                           grid.elevation.count +
                                       e.lower),
            r.has_upper ? stride_r : 0u, a.has_upper ? stride_a : 0u, e.has_upper ? 1u : 0u,
            r.fraction, a.fraction, e.fraction});
      }
    }
  }
}

void ResamplePlan::check_input(const DenseTensorD& polar) const {
  check_shape_against_grid(polar.shape(), grid_, /*with_doppler=*/false);
}

namespace {

inline double gather(const double* p, const ResamplePlan::Tap& t) {
  const double* q = p + t.base;
  const double c00 = std::lerp(q[0], q[t.d_elevation], t.f_elevation);
  const double c01 = std::lerp(q[t.d_azimuth], q[t.d_azimuth + t.d_elevation], t.f_elevation);
  const double c10 = std::lerp(q[t.d_range], q[t.d_range + t.d_elevation], t.f_elevation);
  const double c11 = std::lerp(q[t.d_range + t.d_azimuth],
                               q[t.d_range + t.d_azimuth + t.d_elevation], t.f_elevation);
  const double c0 = std::lerp(c00, c01, t.f_azimuth);
  const double c1 = std::lerp(c10, c11, t.f_azimuth);
  return std::lerp(c0, c1, t.f_range);
}

}  // namespace

CartesianField ResamplePlan::apply(const DenseTensorD& polar) const {
  check_input(polar);
  DenseTensorD out({counts_.nx, counts_.ny, counts_.nz});
  const double* src = polar.values().data();
  double* dst = out.mutable_values().data();
  const Tap* taps = taps_.data();
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(taps_.size());

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) dst[taps[i].voxel] = gather(src, taps[i]);

  return CartesianField(roi_, std::move(out), valid_);
}

CartesianField ResamplePlan::apply_serial(const DenseTensorD& polar) const {
  check_input(polar);
  DenseTensorD out({counts_.nx, counts_.ny, counts_.nz});
  auto dst = out.mutable_values();
  for (const Tap& t : taps_) dst[t.voxel] = gather(polar.values().data(), t);
  return CartesianField(roi_, std::move(out), valid_);
}

CartesianField resample(const DenseTensorD& polar, const PolarGrid4D& grid,
                        const CartesianRoi& roi, Interpolation mode) {
  check_shape_against_grid(polar.shape(), grid, /*with_doppler=*/false);
  return ResamplePlan(grid, roi, mode).apply(polar);
}

}  // namespace srt4d
