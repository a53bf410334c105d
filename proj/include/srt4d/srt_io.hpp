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
#include <functional>
#include <iosfwd>

#include "srt4d/dense_tensor.hpp"
#include "srt4d/grid.hpp"
#include "srt4d/pool.hpp"

namespace srt4d {

// .srt layout, little-endian, no padding:
//
//   off  size  field
//     0     6  magic "4DSRT\0"
//     6     2  version (u16, 1)
//     8    24  roi min x, y, z (f64)
//    32    24  roi max x, y, z (f64)
//    56     8  voxel edge (f64)
//    64     8  density percent (f64)
//    72     4  source valid voxel count (u32)
//    76     4  element count (u32)
//    80  10*n  records: ix, iy, iz (u16), power (f32)
//
// Records are strictly ascending by linear voxel index.
inline constexpr std::size_t kSrtHeaderBytes = 80;
inline constexpr std::size_t kSrtRecordBytes = 10;
inline constexpr std::uint16_t kSrtVersion = 1;

// .rt4 layout, little-endian:
//
//     0     6  magic "4DRT\0\0"
//     6     2  version (u16, 1)
//     8    96  4 axes (doppler, range, azimuth, elevation), each:
//              count (u32), reserved (u32, 0), start (f64), step (f64)
//   104   4*n  row-major f32 power values
inline constexpr std::size_t kRt4HeaderBytes = 104;
inline constexpr std::uint16_t kRt4Version = 1;

inline constexpr std::size_t srt_file_size(std::size_t element_count) {
  return kSrtHeaderBytes + kSrtRecordBytes * element_count;
}

/// Serializes `tensor`; returns bytes written. Throws kOverflow if an axis
/// exceeds 65535 voxels or a count exceeds 32 bits, kIo on stream failure.
std::size_t write_srt(const SparseRadarTensor& tensor, std::ostream& out);

/// Parses one .srt stream. Every malformed input ends in an Error with a
/// distinct kind; nothing is allocated beyond what the stream actually holds.
SparseRadarTensor read_srt(std::istream& in);

struct RawDenseFrame {
  PolarGrid4D grid;
  DenseTensorF tensor;
};

std::size_t write_raw_dense(const DenseTensorF& tensor, const PolarGrid4D& grid,
                            std::ostream& out);
RawDenseFrame read_raw_dense(std::istream& in);

/// Writes through a temporary sibling file and renames it into place, so a
/// failed write never leaves a partial file at `path`.
void write_file_atomic(const std::filesystem::path& path,
                       const std::function<void(std::ostream&)>& writer);

void write_srt_file(const std::filesystem::path& path, const SparseRadarTensor& tensor);
SparseRadarTensor read_srt_file(const std::filesystem::path& path);
void write_raw_dense_file(const std::filesystem::path& path, const DenseTensorF& tensor,
                          const PolarGrid4D& grid);
RawDenseFrame read_raw_dense_file(const std::filesystem::path& path);

}  // namespace srt4d
