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

#include "srt4d/srt_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "srt4d/error.hpp"

namespace srt4d {

namespace {

constexpr std::array<char, 6> kSrtMagic{'4', 'D', 'S', 'R', 'T', '\0'};
constexpr std::array<char, 6> kRt4Magic{'4', 'D', 'R', 'T', '\0', '\0'};
constexpr std::size_t kMaxAxisVoxels = std::numeric_limits<std::uint16_t>::max();
constexpr std::size_t kChunkBytes = std::size_t{1} << 20;

template <typename T>
T byteswap_if_big(T v) {
  if constexpr (std::endian::native == std::endian::little || sizeof(T) == 1) {
    return v;
  } else {
    auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
    std::reverse(bytes.begin(), bytes.end());
    return std::bit_cast<T>(bytes);
  }
}

class ByteWriter {
 public:
  explicit ByteWriter(std::size_t reserve) { buf_.reserve(reserve); }

  template <typename T>
  void put(T v) {
    const auto le = byteswap_if_big(v);
    const char* p = reinterpret_cast<const char*>(&le);
    buf_.append(p, sizeof(T));
  }
  void put_bytes(const char* p, std::size_t n) { buf_.append(p, n); }
  const std::string& bytes() const { return buf_; }

 private:
  std::string buf_;
};

class ByteReader {
 public:
  explicit ByteReader(std::string_view bytes) : bytes_(bytes) {}

  template <typename T>
  T get() {
    T v;
    std::memcpy(&v, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return byteswap_if_big(v);
  }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

// Reads up to `n` bytes; returns what was available.
std::string read_up_to(std::istream& in, std::size_t n) {
  std::string buf(n, '\0');
  in.read(buf.data(), static_cast<std::streamsize>(n));
  buf.resize(static_cast<std::size_t>(in.gcount()));
  return buf;
}

void check_magic(std::string_view got, const std::array<char, 6>& magic, const char* what) {
  const std::size_t n = std::min(got.size(), magic.size());
  if (std::memcmp(got.data(), magic.data(), n) != 0) {
    fail(ErrorKind::kBadMagic, std::string("bad magic: not a ") + what + " stream");
  }
}

[[noreturn]] void truncated(const char* what, std::uint64_t expected, std::uint64_t actual) {
  fail(ErrorKind::kTruncated, std::string("truncated ") + what + ": expected " +
                                  std::to_string(expected) + " bytes, got " +
                                  std::to_string(actual));
}

void expect_end(std::istream& in, const char* what) {
  if (in.peek() != std::char_traits<char>::eof()) {
    fail(ErrorKind::kTrailingData, std::string("trailing bytes after ") + what + " payload");
  }
}

// Bytes left in a seekable stream, if the stream can tell.
std::optional<std::uint64_t> remaining_bytes(std::istream& in) {
  const auto here = in.tellg();
  if (here < 0) return std::nullopt;
  in.seekg(0, std::ios::end);
  const auto end = in.tellg();
  in.seekg(here);
  if (end < here || !in) {
    in.clear();
    in.seekg(here);
    return std::nullopt;
  }
  return static_cast<std::uint64_t>(end - here);
}

void check_stream(std::ostream& out) {
  if (!out) fail(ErrorKind::kIo, "stream write failed");
}

}  // namespace

std::size_t write_srt(const SparseRadarTensor& tensor, std::ostream& out) {
  validate(tensor);
  const VoxelCount n = voxel_count(tensor.roi);
  if (n.nx > kMaxAxisVoxels || n.ny > kMaxAxisVoxels || n.nz > kMaxAxisVoxels) {
    fail(ErrorKind::kOverflow, "roi has more than 65535 voxels on an axis");
  }
  if (tensor.source_valid_count > std::numeric_limits<std::uint32_t>::max()) {
    fail(ErrorKind::kOverflow, "source valid count does not fit in 32 bits");
  }

  ByteWriter w(srt_file_size(tensor.elements.size()));
  w.put_bytes(kSrtMagic.data(), kSrtMagic.size());
  w.put<std::uint16_t>(kSrtVersion);
  for (double v : {tensor.roi.min.x, tensor.roi.min.y, tensor.roi.min.z, tensor.roi.max.x,
                   tensor.roi.max.y, tensor.roi.max.z, tensor.roi.voxel,
                   tensor.density_percent}) {
    w.put<double>(v);
  }
  w.put<std::uint32_t>(static_cast<std::uint32_t>(tensor.source_valid_count));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(tensor.elements.size()));
  for (const SparseElement& e : tensor.elements) {
    w.put<std::uint16_t>(static_cast<std::uint16_t>(e.ix));
    w.put<std::uint16_t>(static_cast<std::uint16_t>(e.iy));
    w.put<std::uint16_t>(static_cast<std::uint16_t>(e.iz));
    w.put<float>(e.power);
  }
  out.write(w.bytes().data(), static_cast<std::streamsize>(w.bytes().size()));
  check_stream(out);
  return w.bytes().size();
}

SparseRadarTensor read_srt(std::istream& in) {
  const std::string header = read_up_to(in, kSrtHeaderBytes);
  check_magic(header, kSrtMagic, ".srt");
  if (header.size() < kSrtMagic.size() + sizeof(std::uint16_t)) {
    truncated(".srt header", kSrtHeaderBytes, header.size());
  }
  ByteReader r(header);
  r.get<std::array<char, 6>>();
  const auto version = r.get<std::uint16_t>();
  if (version != kSrtVersion) {
    fail(ErrorKind::kUnsupportedVersion, "unsupported .srt version " + std::to_string(version));
  }
  if (header.size() < kSrtHeaderBytes) truncated(".srt header", kSrtHeaderBytes, header.size());

  SparseRadarTensor t;
  t.roi.min = {r.get<double>(), r.get<double>(), r.get<double>()};
  t.roi.max = {r.get<double>(), r.get<double>(), r.get<double>()};
  t.roi.voxel = r.get<double>();
  t.density_percent = r.get<double>();
  t.source_valid_count = r.get<std::uint32_t>();
  const std::uint64_t element_count = r.get<std::uint32_t>();

  VoxelCount n;
  try {
    n = voxel_count(t.roi);
    check_density(t.density_percent);
  } catch (const Error& e) {
    fail(ErrorKind::kCorruptHeader, std::string("corrupt .srt header: ") + e.what());
  }
  if (n.nx > kMaxAxisVoxels || n.ny > kMaxAxisVoxels || n.nz > kMaxAxisVoxels) {
    fail(ErrorKind::kCorruptHeader, "corrupt .srt header: axis exceeds 65535 voxels");
  }
  if (t.source_valid_count == 0 || t.source_valid_count > n.total()) {
    fail(ErrorKind::kCorruptHeader, "corrupt .srt header: source valid count " +
                                        std::to_string(t.source_valid_count) + " outside [1, " +
                                        std::to_string(n.total()) + "]");
  }
  const std::uint64_t expected = retained_count(t.density_percent, t.source_valid_count);
  if (element_count != expected) {
    fail(ErrorKind::kCorruptHeader, "corrupt .srt header: element count " +
                                        std::to_string(element_count) + " but density implies " +
                                        std::to_string(expected));
  }

  // Records are pulled in bounded chunks so allocation follows the bytes
  // actually present, never the header's claim.
  const std::uint64_t total_bytes = srt_file_size(element_count);
  const std::size_t chunk_records = kChunkBytes / kSrtRecordBytes;
  std::uint64_t done = 0;
  std::size_t previous = 0;
  while (done < element_count) {
    const std::size_t want =
        static_cast<std::size_t>(std::min<std::uint64_t>(chunk_records, element_count - done));
    const std::string chunk = read_up_to(in, want * kSrtRecordBytes);
    if (chunk.size() < want * kSrtRecordBytes) {
      truncated(".srt records", total_bytes, kSrtHeaderBytes + done * kSrtRecordBytes + chunk.size());
    }
    ByteReader cr(chunk);
    for (std::size_t i = 0; i < want; ++i, ++done) {
      SparseElement e;
      e.ix = cr.get<std::uint16_t>();
      e.iy = cr.get<std::uint16_t>();
      e.iz = cr.get<std::uint16_t>();
      e.power = cr.get<float>();
      if (e.ix >= n.nx || e.iy >= n.ny || e.iz >= n.nz) {
        fail(ErrorKind::kRecordOutOfRange, "record " + std::to_string(done) +
                                               " has a voxel index outside the roi");
      }
      if (!(e.power >= 0.0f) || !std::isfinite(e.power)) {
        fail(ErrorKind::kRecordOutOfRange,
             "record " + std::to_string(done) + " has a negative or non-finite power");
      }
      const std::size_t linear = linear_index(n, {e.ix, e.iy, e.iz});
      if (done > 0 && linear <= previous) {
        fail(ErrorKind::kUnsortedRecords,
             "record " + std::to_string(done) + " is not in ascending voxel order");
      }
      previous = linear;
      t.elements.push_back(e);
    }
  }
  expect_end(in, ".srt");
  return t;
}

std::size_t write_raw_dense(const DenseTensorF& tensor, const PolarGrid4D& grid,
                            std::ostream& out) {
  grid.validate();
  const std::array<const AxisSpec*, 4> axes{&grid.doppler, &grid.range, &grid.azimuth,
                                            &grid.elevation};
  if (tensor.rank() != 4) fail(ErrorKind::kShapeMismatch, "raw dense dump needs a 4D tensor");
  static constexpr std::array<const char*, 4> kNames{"doppler", "range", "azimuth", "elevation"};
  for (std::size_t i = 0; i < 4; ++i) {
    if (tensor.shape()[i] != axes[i]->count) {
      fail(ErrorKind::kShapeMismatch, std::string(kNames[i]) + " axis has " +
                                          std::to_string(tensor.shape()[i]) +
                                          " bins, grid expects " + std::to_string(axes[i]->count));
    }
    if (axes[i]->count > std::numeric_limits<std::uint32_t>::max()) {
      fail(ErrorKind::kOverflow, std::string(kNames[i]) + " axis too long for .rt4");
    }
  }

  ByteWriter w(kRt4HeaderBytes);
  w.put_bytes(kRt4Magic.data(), kRt4Magic.size());
  w.put<std::uint16_t>(kRt4Version);
  for (const AxisSpec* a : axes) {
    w.put<std::uint32_t>(static_cast<std::uint32_t>(a->count));
    w.put<std::uint32_t>(0);
    w.put<double>(a->start);
    w.put<double>(a->step);
  }
  out.write(w.bytes().data(), static_cast<std::streamsize>(w.bytes().size()));

  auto values = tensor.values();
  if constexpr (std::endian::native == std::endian::little) {
    out.write(reinterpret_cast<const char*>(values.data()),
              static_cast<std::streamsize>(values.size() * sizeof(float)));
  } else {
    for (float v : values) {
      const float le = byteswap_if_big(v);
      out.write(reinterpret_cast<const char*>(&le), sizeof(le));
    }
  }
  check_stream(out);
  return kRt4HeaderBytes + values.size() * sizeof(float);
}

RawDenseFrame read_raw_dense(std::istream& in) {
  const std::string header = read_up_to(in, kRt4HeaderBytes);
  check_magic(header, kRt4Magic, ".rt4");
  if (header.size() < kRt4Magic.size() + sizeof(std::uint16_t)) {
    truncated(".rt4 header", kRt4HeaderBytes, header.size());
  }
  ByteReader r(header);
  r.get<std::array<char, 6>>();
  const auto version = r.get<std::uint16_t>();
  if (version != kRt4Version) {
    fail(ErrorKind::kUnsupportedVersion, "unsupported .rt4 version " + std::to_string(version));
  }
  if (header.size() < kRt4HeaderBytes) truncated(".rt4 header", kRt4HeaderBytes, header.size());

  RawDenseFrame frame;
  std::vector<std::size_t> shape;
  std::uint64_t total = 1;
  for (AxisSpec* a :
       {&frame.grid.doppler, &frame.grid.range, &frame.grid.azimuth, &frame.grid.elevation}) {
    a->count = r.get<std::uint32_t>();
    const auto reserved = r.get<std::uint32_t>();
    a->start = r.get<double>();
    a->step = r.get<double>();
    if (reserved != 0) fail(ErrorKind::kCorruptHeader, "corrupt .rt4 header: reserved field set");
    if (a->count == 0) fail(ErrorKind::kCorruptHeader, "corrupt .rt4 header: empty axis");
    shape.push_back(a->count);
    if (total > (std::uint64_t{1} << 40) / a->count) {
      fail(ErrorKind::kCorruptHeader, "corrupt .rt4 header: tensor size overflows");
    }
    total *= a->count;
  }
  try {
    frame.grid.validate();
  } catch (const Error& e) {
    fail(ErrorKind::kCorruptHeader, std::string("corrupt .rt4 header: ") + e.what());
  }

  const std::uint64_t total_bytes = kRt4HeaderBytes + total * sizeof(float);
  std::vector<float> values;
  if (const auto avail = remaining_bytes(in); avail && *avail >= total * sizeof(float)) {
    values.reserve(static_cast<std::size_t>(total));
  }
  const std::size_t chunk_values = kChunkBytes / sizeof(float);
  while (values.size() < total) {
    const std::size_t want =
        static_cast<std::size_t>(std::min<std::uint64_t>(chunk_values, total - values.size()));
    const std::size_t at = values.size();
    values.resize(at + want);
    in.read(reinterpret_cast<char*>(values.data() + at),
            static_cast<std::streamsize>(want * sizeof(float)));
    const auto got = static_cast<std::size_t>(in.gcount());
    if (got < want * sizeof(float)) {
      truncated(".rt4 values", total_bytes, kRt4HeaderBytes + at * sizeof(float) + got);
    }
  }
  if constexpr (std::endian::native != std::endian::little) {
    for (float& v : values) v = byteswap_if_big(v);
  }
  expect_end(in, ".rt4");
  frame.tensor = DenseTensorF(std::move(shape), std::move(values));
  return frame;
}

void write_file_atomic(const std::filesystem::path& path,
                       const std::function<void(std::ostream&)>& writer) {
  std::random_device rd;
  std::filesystem::path tmp = path;
  tmp += ".tmp-" + std::to_string(rd());
  try {
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) fail(ErrorKind::kIo, "cannot open " + tmp.string() + " for writing");
      writer(out);
      out.flush();
      if (!out) fail(ErrorKind::kIo, "write to " + tmp.string() + " failed");
    }
    std::filesystem::rename(tmp, path);
  } catch (const std::filesystem::filesystem_error& e) {
    std::error_code ignored;
    std::filesystem::remove(tmp, ignored);
    fail(ErrorKind::kIo, "cannot move " + tmp.string() + " to " + path.string() + ": " + e.what());
  } catch (...) {
    std::error_code ignored;
    std::filesystem::remove(tmp, ignored);
    throw;
  }
}

namespace {

std::ifstream open_for_read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kIo, "cannot open " + path.string());
  return in;
}

template <typename F>
auto with_path_context(const std::filesystem::path& path, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

}  // namespace

void write_srt_file(const std::filesystem::path& path, const SparseRadarTensor& tensor) {
  write_file_atomic(path, [&](std::ostream& out) { write_srt(tensor, out); });
}

SparseRadarTensor read_srt_file(const std::filesystem::path& path) {
  return with_path_context(path, [&] {
    std::ifstream in = open_for_read(path);
    return read_srt(in);
  });
}

void write_raw_dense_file(const std::filesystem::path& path, const DenseTensorF& tensor,
                          const PolarGrid4D& grid) {
  write_file_atomic(path, [&](std::ostream& out) { write_raw_dense(tensor, grid, out); });
}

RawDenseFrame read_raw_dense_file(const std::filesystem::path& path) {
  return with_path_context(path, [&] {
    std::ifstream in = open_for_read(path);
    return read_raw_dense(in);
  });
}

}  // namespace srt4d
