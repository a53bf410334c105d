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
#include <iosfwd>
#include <string>
#include <vector>

#include "srt4d/error.hpp"
#include "srt4d/grid.hpp"
#include "srt4d/pool.hpp"
#include "srt4d/resample.hpp"
#include "srt4d/srt_io.hpp"

namespace srt4d {

/// Standard density levels of a sweep, in percent.
std::vector<double> default_densities();

/// Reference training rates (iteration/s) of a full-scale detector fed sparse
/// and dense inputs, and their ratio. Reported next to measured numbers only.
inline constexpr double kReferenceSparseRate = 8.04;
inline constexpr double kReferenceDenseRate = 0.47;
inline constexpr double kReferenceSpeedup = 17.1;

/// <out_dir>/<frame stem>_d<density>.srt
std::filesystem::path srt_path_for(const std::filesystem::path& frame,
                                   const std::filesystem::path& out_dir, double density_percent);

/// The full dense-to-sparse conversion of one frame on a prepared plan.
SparseRadarTensor convert_frame(const RawDenseFrame& frame, const ResamplePlan& plan,
                                double density_percent);

struct SweepRow {
  double density_percent = 0;
  double element_count = 0;    // mean over frames
  double file_bytes = 0;       // mean over frames
  double convert_seconds = 0;  // mean per-frame time for a standalone convert

  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

struct SweepReport {
  std::vector<SweepRow> rows;
  std::size_t frames_converted = 0;
  std::vector<std::string> failures;
  std::string machine_label;
  std::string timestamp;
};

struct SweepOptions {
  CartesianRoi roi = default_roi();
  Interpolation interpolation = Interpolation::kTrilinear;
  std::vector<double> densities = default_densities();
  std::filesystem::path out_dir = ".";
  int threads = 1;  // frame-level parallelism
};

/// Converts every frame at every density and writes the .srt files. A frame
/// that fails to load is recorded in `failures` and skipped; throws kIo only
/// if no frame converts.
SweepReport run_sweep(const std::vector<std::filesystem::path>& frames,
                      const SweepOptions& options);

enum class ThroughputMode { kOnline, kOffline };

struct ThroughputReport {
  ThroughputMode mode = ThroughputMode::kOnline;
  std::size_t frames_processed = 0;
  double wall_seconds = 0;  // median pass
  double frames_per_second = 0;
  double speedup_ratio = 0;  // offline / online
};

struct ThroughputResult {
  ThroughputReport online;
  ThroughputReport offline;
  double density_percent = 0;
  std::size_t repetitions = 0;
  double offline_bytes_per_frame = 0;
  std::string machine_label;
  std::string timestamp;
};

struct ThroughputOptions {
  CartesianRoi roi = default_roi();
  Interpolation interpolation = Interpolation::kTrilinear;
  double density_percent = 5.0;
  std::size_t repetitions = 5;
  std::size_t warmup = 1;
  /// Where the pre-converted .srt files live; empty means next to each frame.
  std::filesystem::path srt_dir;
  int threads = 1;  // >1 runs frames of a pass in parallel
};

/// Online: read .rt4, reduce Doppler, resample, pool. Offline: read the
/// matching .srt and materialize its elements as points. Warm-up passes are
/// excluded; each mode reports its median pass.
ThroughputResult run_throughput(const std::vector<std::filesystem::path>& frames,
                                const ThroughputOptions& options);

/// Offline materialization: voxel centers with power.
struct SparsePoint {
  float x, y, z, power;
};
std::vector<SparsePoint> materialize(const SparseRadarTensor& tensor);

// CSV columns: density_percent,element_count,file_bytes,convert_seconds
void write_sweep_csv(const SweepReport& report, std::ostream& out);
std::vector<SweepRow> read_sweep_csv(std::istream& in);
// CSV columns: mode,frames_per_second,speedup_ratio
void write_throughput_csv(const ThroughputResult& result, std::ostream& out);

/// Writes <dir>/sweep.csv and <dir>/sweep.meta.json.
void emit_plot_data(const SweepReport& report, const std::filesystem::path& dir);
/// Writes <dir>/throughput.csv and <dir>/throughput.meta.json.
void emit_plot_data(const ThroughputResult& result, const std::filesystem::path& dir);

std::string machine_label();
std::string utc_timestamp();

}  // namespace srt4d
