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

// Shared generators and oracles for the unit, property and acceptance tests.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "srt4d/grid.hpp"
#include "srt4d/pool.hpp"
#include "srt4d/resample.hpp"

namespace srt4d::testing {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(gen_); }
  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(gen_);
  }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(gen_); }
  std::uint64_t bits() { return gen_(); }
  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

/// A density as an exact decimal p / 10^k percent, e.g. 0.01 = 1 / 10^2.
struct DecimalDensity {
  std::uint64_t numerator;
  int decimals;
  double value() const { return static_cast<double>(numerator) / std::pow(10.0, decimals); }
};

inline std::vector<DecimalDensity> table_densities() {
  return {{1, 2}, {1, 1}, {1, 0}, {3, 0}, {5, 0}, {10, 0}, {15, 0}, {20, 0}, {30, 0}, {50, 0}};
}

/// min(ceil(p / (100 * 10^k) * V), V) in integer arithmetic.
inline std::uint64_t rational_retained_count(DecimalDensity d, std::uint64_t valid) {
  unsigned __int128 den = 100;
  for (int i = 0; i < d.decimals; ++i) den *= 10;
  const unsigned __int128 num = static_cast<unsigned __int128>(d.numerator) * valid;
  std::uint64_t k = static_cast<std::uint64_t>((num + den - 1) / den);
  return std::min(std::max<std::uint64_t>(k, 1), valid);
}

/// Selected linear voxel indices by sorting every valid voxel (power
/// descending, index ascending) and taking the first K.
inline std::vector<std::size_t> full_sort_oracle(const CartesianField& field, std::uint64_t k) {
  std::vector<std::size_t> idx;
  const auto valid = field.valid();
  const auto values = field.values().values();
  for (std::size_t i = 0; i < valid.size(); ++i) {
    if (valid[i]) idx.push_back(i);
  }
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (values[a] != values[b]) return values[a] > values[b];
    return a < b;
  });
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

inline std::vector<std::size_t> selected_indices(const SparseRadarTensor& t) {
  const VoxelCount n = voxel_count(t.roi);
  std::vector<std::size_t> out;
  for (const SparseElement& e : t.elements) out.push_back(linear_index(n, {e.ix, e.iy, e.iz}));
  return out;
}

enum class TiePattern { kDistinct, kFewLevels, kAllEqual, kZerosAndPeaks };

/// Random field on a (nx, ny, nz) RoI at the origin with a random validity
/// mask (at least one valid voxel) and the requested tie structure.
inline CartesianField random_field(Rng& rng, std::size_t nx, std::size_t ny, std::size_t nz,
                                   TiePattern ties, double valid_fraction = 0.8) {
  const CartesianRoi roi{{0, 0, 0},
                         {static_cast<double>(nx), static_cast<double>(ny), static_cast<double>(nz)},
                         1.0};
  const std::size_t n = nx * ny * nz;
  std::vector<double> values(n, 0.0);
  std::vector<std::uint8_t> valid(n, 0);
  for (std::size_t i = 0; i < n; ++i) valid[i] = rng.coin(valid_fraction) ? 1 : 0;
  valid[rng.index(n)] = 1;
  const double level = rng.uniform(0.5, 4.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!valid[i]) continue;
    switch (ties) {
      case TiePattern::kDistinct: values[i] = rng.uniform(0.0, 1000.0); break;
      case TiePattern::kFewLevels: values[i] = static_cast<double>(rng.integer(0, 4)); break;
      case TiePattern::kAllEqual: values[i] = level; break;
      case TiePattern::kZerosAndPeaks: values[i] = rng.coin(0.97) ? 0.0 : rng.uniform(1.0, 2.0); break;
    }
  }
  return CartesianField(roi, DenseTensorD({nx, ny, nz}, std::move(values)), std::move(valid));
}

/// Random well-formed sparse tensor: random RoI, density and valid count,
/// K = retained_count distinct sorted voxels, arbitrary nonnegative finite
/// float bit patterns (zero and subnormals included).
inline SparseRadarTensor random_sparse_tensor(Rng& rng, std::size_t max_axis = 40) {
  SparseRadarTensor t;
  const double voxel = rng.uniform(0.05, 1.0);
  const Vec3 lo{rng.uniform(-50, 50), rng.uniform(-50, 50), rng.uniform(-10, 10)};
  const std::size_t n[3] = {rng.index(max_axis) + 1, rng.index(max_axis) + 1, rng.index(max_axis) + 1};
  t.roi = {lo,
           {lo.x + (static_cast<double>(n[0]) + 0.5) * voxel, lo.y + (static_cast<double>(n[1]) + 0.5) * voxel,
            lo.z + (static_cast<double>(n[2]) + 0.5) * voxel},
           voxel};
  const VoxelCount counts = voxel_count(t.roi);
  const std::size_t total = counts.total();
  const auto densities = table_densities();
  t.density_percent = rng.coin() ? densities[rng.index(densities.size())].value() : rng.uniform(1e-3, 100.0);
  t.source_valid_count = rng.index(total) + 1;
  const std::uint64_t k = retained_count(t.density_percent, t.source_valid_count);
  std::vector<std::size_t> all(total);
  for (std::size_t i = 0; i < total; ++i) all[i] = i;
  std::shuffle(all.begin(), all.end(), rng.engine());
  all.resize(k);
  std::sort(all.begin(), all.end());
  for (std::size_t l : all) {
    const VoxelIndex i = unravel(counts, l);
    float power;
    do {
      const auto bits = static_cast<std::uint32_t>(rng.bits()) & 0x7fffffffu;
      power = std::bit_cast<float>(bits);
    } while (!std::isfinite(power));
    if (rng.coin(0.05)) power = 0.0f;
    t.elements.push_back({static_cast<std::uint32_t>(i.ix), static_cast<std::uint32_t>(i.iy),
                          static_cast<std::uint32_t>(i.iz), power});
  }
  return t;
}

/// Polar grid used by the resampling tests: range 2..42 m, +-60 deg
/// azimuth, +-20 deg elevation.
inline PolarGrid4D small_polar_grid(std::size_t nr = 40, std::size_t na = 24, std::size_t ne = 10) {
  const double az = 60.0 * std::numbers::pi / 180.0;
  const double el = 20.0 * std::numbers::pi / 180.0;
  PolarGrid4D g;
  g.doppler = {4, -2.0, 1.0};
  g.range = {nr, 2.0, 40.0 / static_cast<double>(nr)};
  g.azimuth = {na, -az, 2 * az / static_cast<double>(na)};
  g.elevation = {ne, -el, 2 * el / static_cast<double>(ne)};
  return g;
}

/// Unique scratch directory, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::mt19937_64 gen(std::random_device{}());
    path_ = std::filesystem::temp_directory_path() / ("srt4d_test_" + std::to_string(gen()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace srt4d::testing
