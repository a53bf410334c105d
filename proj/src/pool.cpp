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

#include "srt4d/pool.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "srt4d/error.hpp"

namespace srt4d {

void check_density(double density_percent) {
  if (!(density_percent > 0.0 && density_percent <= 100.0)) {
    fail(ErrorKind::kInvalidArgument,
         "density must be in (0, 100], got " + format_number(density_percent));
  }
}

std::uint64_t retained_count(double density_percent, std::uint64_t valid_count) {
  check_density(density_percent);
  if (valid_count == 0) return 0;
  const long double exact =
      static_cast<long double>(density_percent) * static_cast<long double>(valid_count) / 100.0L;
  const long double nearest = std::nearbyint(exact);
  const long double k = std::abs(exact - nearest) <= 1e-9L ? nearest : std::ceil(exact);
  const auto count = static_cast<std::uint64_t>(std::max(k, 1.0L));
  return std::min(count, valid_count);
}

namespace {

struct Candidate {
  double power;
  std::uint32_t voxel;
};

// Strict weak order: higher power first, then lower voxel index.
inline bool ranks_before(const Candidate& a, const Candidate& b) {
  if (a.power != b.power) return a.power > b.power;
  return a.voxel < b.voxel;
}

std::vector<Candidate> select_top(const CartesianField& field, double density_percent) {
  check_density(density_percent);
  if (field.valid_count() == 0) {
    fail(ErrorKind::kInvalidArgument, "field has no valid voxels to pool");
  }
  const auto k = static_cast<std::size_t>(retained_count(density_percent, field.valid_count()));

  auto values = field.values().values();
  auto valid = field.valid();
  std::vector<Candidate> pool;
  pool.reserve(field.valid_count());
  for (std::size_t i = 0; i < valid.size(); ++i) {
    if (valid[i]) pool.push_back({values[i], static_cast<std::uint32_t>(i)});
  }
  std::nth_element(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k - 1), pool.end(),
                   ranks_before);
  pool.resize(k);
  return pool;
}

}  // namespace

SparseRadarTensor top_percent_pool(const CartesianField& field, double density_percent) {
  if (field.counts().total() > std::numeric_limits<std::uint32_t>::max()) {
    fail(ErrorKind::kOverflow, "roi has more voxels than a 32-bit index can address");
  }
  std::vector<Candidate> top = select_top(field, density_percent);
  std::sort(top.begin(), top.end(),
            [](const Candidate& a, const Candidate& b) { return a.voxel < b.voxel; });

  SparseRadarTensor out;
  out.roi = field.roi();
  out.density_percent = density_percent;
  out.source_valid_count = field.valid_count();
  out.elements.reserve(top.size());
  for (const Candidate& c : top) {
    const VoxelIndex v = unravel(field.counts(), c.voxel);
    out.elements.push_back({static_cast<std::uint32_t>(v.ix), static_cast<std::uint32_t>(v.iy),
                            static_cast<std::uint32_t>(v.iz), static_cast<float>(c.power)});
  }
  return out;
}

double selection_threshold(const CartesianField& field, double density_percent) {
  const std::vector<Candidate> top = select_top(field, density_percent);
  // nth_element leaves the boundary element at the back of the kept range.
  return top.back().power;
}

void validate(const SparseRadarTensor& tensor) {
  check_density(tensor.density_percent);
  const VoxelCount n = voxel_count(tensor.roi);
  if (tensor.source_valid_count == 0 || tensor.source_valid_count > n.total()) {
    fail(ErrorKind::kInvalidArgument, "source valid count " +
                                          std::to_string(tensor.source_valid_count) +
                                          " outside [1, " + std::to_string(n.total()) + "]");
  }
  const std::uint64_t expected = retained_count(tensor.density_percent, tensor.source_valid_count);
  if (tensor.elements.size() != expected) {
    fail(ErrorKind::kInvalidArgument, "element count " + std::to_string(tensor.elements.size()) +
                                          " does not match expected " + std::to_string(expected));
  }
  std::size_t previous = 0;
  for (std::size_t i = 0; i < tensor.elements.size(); ++i) {
    const SparseElement& e = tensor.elements[i];
    if (e.ix >= n.nx || e.iy >= n.ny || e.iz >= n.nz) {
      fail(ErrorKind::kRecordOutOfRange, "element " + std::to_string(i) + " outside the roi");
    }
    if (!(e.power >= 0.0f) || !std::isfinite(e.power)) {
      fail(ErrorKind::kInvalidArgument, "element " + std::to_string(i) + " has invalid power");
    }
    const std::size_t linear = linear_index(n, {e.ix, e.iy, e.iz});
    if (i > 0 && linear <= previous) {
      fail(ErrorKind::kUnsortedRecords,
           "element " + std::to_string(i) + " is not in ascending voxel order");
    }
    previous = linear;
  }
}

}  // namespace srt4d
