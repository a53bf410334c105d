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
#include <filesystem>
#include <string>
#include <vector>

#include "srt4d/dense_tensor.hpp"
#include "srt4d/grid.hpp"

namespace srt4d {

inline constexpr double kSpeedOfLight = 299792458.0;

struct ChirpConfig {
  double carrier_wavelength = 0.004;  // m
  double slope = 0.0;                 // Hz/s
  double sample_rate = 0.0;           // Hz
  std::size_t samples_per_chirp = 256;
  std::size_t chirps_per_frame = 128;
  double chirp_interval = 50e-6;      // s

  void validate() const;

  /// Beat-frequency spacing of adjacent range bins.
  double bin_frequency() const { return sample_rate / static_cast<double>(samples_per_chirp); }
  double range_resolution() const;
  /// Upper end of the one-sided range axis, (sample_rate / 2) c / (2 slope).
  double max_range() const;
  double velocity_resolution() const;
  /// Half-width of the unambiguous velocity interval.
  double max_velocity() const;

  /// 256 samples at 10 MHz, 128 chirps, 90 m maximum range.
  static ChirpConfig desk_default();

  friend bool operator==(const ChirpConfig&, const ChirpConfig&) = default;
};

/// Uniform planar virtual array, half-wavelength spacing. Azimuth elements
/// run along +y, elevation elements along +z.
struct VirtualArray {
  std::size_t azimuth_elements = 64;
  std::size_t elevation_elements = 32;

  void validate() const;
  friend bool operator==(const VirtualArray&, const VirtualArray&) = default;
};

struct PointTarget {
  Vec3 position;               // m, sensor frame
  double radial_velocity = 0;  // m/s, positive = receding
  double amplitude = 1.0;      // linear signal amplitude
};

struct SceneSpec {
  std::vector<PointTarget> targets;
  double noise_floor = 0.0;  // complex noise variance per time sample
  std::uint64_t seed = 0;

  void validate() const;
};

/// (Doppler, range, azimuth, elevation) axes matching the FFT bins of `cfg`
/// and symmetric angle fields of view.
PolarGrid4D make_polar_grid(const ChirpConfig& cfg, const VirtualArray& array,
                            double azimuth_fov_rad, double elevation_fov_rad);

/// f_b = 2 slope r / c. Throws kOutOfRange outside [0, max_range).
double beat_frequency(double range_m, const ChirpConfig& cfg);

/// f_d = 2 v / lambda. Throws kOutOfRange outside the unambiguous interval.
double doppler_frequency(double radial_velocity, const ChirpConfig& cfg);

/// Synthesizes one dense power frame: per-element beat signals with additive
/// circular Gaussian noise (Philox, keyed by seed and element), then
/// fast-time FFT (half-bin shifted so bin i is centered on range
/// (i + 0.5) dr), slow-time FFT with zero Doppler centered, and matched
/// steering onto the grid's azimuth/elevation bin centers. Output power is
/// |X|^2 / (samples * chirps * elements), shape (D, R, A, E).
DenseTensorF synthesize_frame(const SceneSpec& scene, const ChirpConfig& cfg,
                              const VirtualArray& array, const PolarGrid4D& grid);

struct BinIndex4 {
  std::size_t doppler = 0;
  std::size_t range = 0;
  std::size_t azimuth = 0;
  std::size_t elevation = 0;

  friend bool operator==(const BinIndex4&, const BinIndex4&) = default;
};

/// Analytic peak bin of every target. Throws kOutOfRange for a target outside
/// the grid on any axis.
std::vector<BinIndex4> expected_bins(const SceneSpec& scene, const ChirpConfig& cfg,
                                     const VirtualArray& array, const PolarGrid4D& grid);

/// Scene file contents: the scene plus the radar setup it is rendered with.
struct SceneDocument {
  SceneSpec scene;
  ChirpConfig chirp;
  VirtualArray array;
  PolarGrid4D grid;
};

/// Parses the JSON scene schema (see README). Unknown keys are rejected.
SceneDocument parse_scene(const std::string& json_text);
SceneDocument load_scene_file(const std::filesystem::path& path);

}  // namespace srt4d
