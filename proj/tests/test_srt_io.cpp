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

#include <gtest/gtest.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "srt4d/error.hpp"
#include "srt4d/srt_io.hpp"
#include "test_util.hpp"

namespace srt4d {
namespace {

using testing::Rng;

std::string to_bytes(const SparseRadarTensor& t) {
  std::ostringstream out;
  write_srt(t, out);
  return out.str();
}

SparseRadarTensor from_bytes(const std::string& bytes) {
  std::istringstream in(bytes);
  return read_srt(in);
}

ErrorKind read_kind(const std::string& bytes) {
  try {
    from_bytes(bytes);
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "read succeeded";
  return ErrorKind::kIo;
}

SparseRadarTensor one_element() {
  SparseRadarTensor t;
  t.roi = {{0, -1, -0.5}, {4, 1, 0.5}, 0.5};  // 8 x 4 x 2 voxels
  t.density_percent = 1;
  t.source_valid_count = 50;
  t.elements = {{3, 2, 1, 1.5f}};
  return t;
}

template <typename T>
void put(std::string& s, std::size_t off, T v) {
  std::memcpy(s.data() + off, &v, sizeof v);  // tests run on little-endian hosts
}

TEST(SrtWrite, OneElementIsNinetyBytes) {
  const std::string b = to_bytes(one_element());
  EXPECT_EQ(b.size(), 90u);
  EXPECT_EQ(srt_file_size(1), 90u);
}

// Hand-assembled expected bytes for the documented layout.
TEST(SrtWrite, ByteLayout) {
  std::string want(90, '\0');
  std::memcpy(want.data(), "4DSRT\0", 6);
  put<std::uint16_t>(want, 6, 1);
  const double hdr[] = {0, -1, -0.5, 4, 1, 0.5, 0.5, 1};
  for (int i = 0; i < 8; ++i) put(want, 8 + 8 * i, hdr[i]);
  put<std::uint32_t>(want, 72, 50);
  put<std::uint32_t>(want, 76, 1);
  put<std::uint16_t>(want, 80, 3);
  put<std::uint16_t>(want, 82, 2);
  put<std::uint16_t>(want, 84, 1);
  put<float>(want, 86, 1.5f);
  EXPECT_EQ(to_bytes(one_element()), want);
}

TEST(SrtRead, RoundTripRandomTensors) {
  Rng rng(41);
  for (int i = 0; i < 300; ++i) {
    const SparseRadarTensor t = testing::random_sparse_tensor(rng);
    const std::string b = to_bytes(t);
    ASSERT_EQ(b.size(), srt_file_size(t.elements.size()));
    const SparseRadarTensor back = from_bytes(b);
    ASSERT_EQ(back, t);
    for (std::size_t e = 0; e < t.elements.size(); ++e) {
      ASSERT_EQ(std::bit_cast<std::uint32_t>(back.elements[e].power),
                std::bit_cast<std::uint32_t>(t.elements[e].power));
    }
    ASSERT_EQ(to_bytes(back), b);
  }
}

TEST(SrtRead, BadMagic) {
  std::string b = to_bytes(one_element());
  b[1] = 'X';
  EXPECT_EQ(read_kind(b), ErrorKind::kBadMagic);
  EXPECT_EQ(read_kind("4DR"), ErrorKind::kBadMagic);
}

TEST(SrtRead, UnsupportedVersion) {
  std::string b = to_bytes(one_element());
  put<std::uint16_t>(b, 6, 2);
  EXPECT_EQ(read_kind(b), ErrorKind::kUnsupportedVersion);
}

TEST(SrtRead, TruncationNamesLengths) {
  const std::string b = to_bytes(one_element());
  try {
    from_bytes(b.substr(0, 85));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kTruncated);
    const std::string msg = e.what();
    EXPECT_NE(msg.find("90"), std::string::npos) << msg;
    EXPECT_NE(msg.find("85"), std::string::npos) << msg;
  }
  EXPECT_EQ(read_kind(b.substr(0, 40)), ErrorKind::kTruncated);
  EXPECT_EQ(read_kind(b.substr(0, 6)), ErrorKind::kTruncated);
}

TEST(SrtRead, RecordErrors) {
  SparseRadarTensor t = one_element();
  t.density_percent = 4;  // two elements
  t.elements = {{0, 0, 0, 1.0f}, {1, 0, 0, 2.0f}};
  std::string b = to_bytes(t);
  std::string unsorted = b;
  put<std::uint16_t>(unsorted, 90, 0);  // second record now equals the first
  EXPECT_EQ(read_kind(unsorted), ErrorKind::kUnsortedRecords);
  std::string out_of_range = b;
  put<std::uint16_t>(out_of_range, 84, 2);  // iz = 2 with nz = 2
  EXPECT_EQ(read_kind(out_of_range), ErrorKind::kRecordOutOfRange);
  std::string negative = b;
  put<float>(negative, 86, -1.0f);
  EXPECT_EQ(read_kind(negative), ErrorKind::kRecordOutOfRange);
  std::string nan = b;
  put<float>(nan, 86, NAN);
  EXPECT_EQ(read_kind(nan), ErrorKind::kRecordOutOfRange);
}

TEST(SrtRead, HeaderErrors) {
  const std::string b = to_bytes(one_element());
  std::string wrong_count = b;
  put<std::uint32_t>(wrong_count, 76, 2);
  EXPECT_EQ(read_kind(wrong_count + std::string(10, '\0')), ErrorKind::kCorruptHeader);
  std::string bad_voxel = b;
  put<double>(bad_voxel, 56, -0.5);
  EXPECT_EQ(read_kind(bad_voxel), ErrorKind::kCorruptHeader);
  std::string bad_density = b;
  put<double>(bad_density, 64, 0.0);
  EXPECT_EQ(read_kind(bad_density), ErrorKind::kCorruptHeader);
  std::string bad_valid = b;
  put<std::uint32_t>(bad_valid, 72, 1000);  // more than 64 voxels
  EXPECT_EQ(read_kind(bad_valid), ErrorKind::kCorruptHeader);
  EXPECT_EQ(read_kind(b + "x"), ErrorKind::kTrailingData);
}

TEST(SrtWrite, AxisOverflow) {
  SparseRadarTensor t = one_element();
  t.roi = {{0, 0, 0}, {70000, 1, 1}, 1.0};
  t.source_valid_count = 1;
  t.density_percent = 100;
  t.elements = {{0, 0, 0, 1.0f}};
  std::ostringstream out;
  try {
    write_srt(t, out);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kOverflow);
  }
}

TEST(SrtWrite, RejectsInvalidTensor) {
  SparseRadarTensor t = one_element();
  t.elements.clear();
  std::ostringstream out;
  EXPECT_THROW(write_srt(t, out), Error);
}

TEST(SrtFuzz, ArbitraryBytesFailCleanly) {
  Rng rng(42);
  const std::string seed_bytes = to_bytes(testing::random_sparse_tensor(rng, 8));
  for (int i = 0; i < 5000; ++i) {
    std::string b;
    if (i % 2 == 0) {
      b = seed_bytes;
      const std::size_t flips = rng.index(8) + 1;
      for (std::size_t f = 0; f < flips; ++f) b[rng.index(b.size())] = static_cast<char>(rng.bits());
      if (rng.coin(0.3)) b.resize(rng.index(b.size() + 1));
    } else {
      b.resize(rng.index(200));
      for (char& c : b) c = static_cast<char>(rng.bits());
      if (b.size() >= 8 && rng.coin()) {
        std::memcpy(b.data(), "4DSRT\0\1\0", 8);
      }
    }
    try {
      const SparseRadarTensor t = from_bytes(b);
      EXPECT_NO_THROW(validate(t));
    } catch (const Error&) {
    }
  }
}

TEST(RawDense, SizeAndRoundTrip) {
  Rng rng(43);
  PolarGrid4D g;
  g.doppler = {2, -1, 1};
  g.range = {2, 0, 1};
  g.azimuth = {2, -0.5, 0.5};
  g.elevation = {2, -0.25, 0.25};
  std::vector<float> v(16);
  for (auto& x : v) x = static_cast<float>(rng.uniform(0, 9));
  const DenseTensorF t({2, 2, 2, 2}, v);
  std::ostringstream out;
  EXPECT_EQ(write_raw_dense(t, g, out), kRt4HeaderBytes + 16 * 4);
  const std::string b = out.str();
  EXPECT_EQ(b.size(), 104u + 64u);
  std::istringstream in(b);
  const RawDenseFrame f = read_raw_dense(in);
  EXPECT_EQ(f.grid, g);
  EXPECT_EQ(f.tensor.shape(), t.shape());
  EXPECT_TRUE(std::equal(v.begin(), v.end(), f.tensor.values().begin()));

  std::string bad_version = b;
  put<std::uint16_t>(bad_version, 6, 9);
  std::istringstream bv(bad_version);
  try {
    read_raw_dense(bv);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kUnsupportedVersion);
  }
  std::istringstream truncated(b.substr(0, b.size() - 3));
  EXPECT_THROW(read_raw_dense(truncated), Error);
  std::string huge = b;
  put<std::uint32_t>(huge, 8, 0xffffffffu);
  std::istringstream hs(huge);
  EXPECT_THROW(read_raw_dense(hs), Error);
}

TEST(RawDenseFuzz, ArbitraryBytesFailCleanly) {
  Rng rng(44);
  for (int i = 0; i < 3000; ++i) {
    std::string b(rng.index(300), '\0');
    for (char& c : b) c = static_cast<char>(rng.bits());
    if (b.size() >= 8 && rng.coin()) std::memcpy(b.data(), "4DRT\0\0\1\0", 8);
    std::istringstream in(b);
    try {
      read_raw_dense(in);
    } catch (const Error&) {
    }
  }
}

TEST(Files, AtomicWriteAndPathInErrors) {
  testing::TempDir dir;
  const auto p = dir / "a.srt";
  write_srt_file(p, one_element());
  EXPECT_EQ(std::filesystem::file_size(p), 90u);
  EXPECT_EQ(read_srt_file(p), one_element());
  // Only the final file remains.
  std::size_t entries = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir.path())) ++entries;
  EXPECT_EQ(entries, 1u);
  try {
    read_srt_file(dir / "missing.srt");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kIo);
    EXPECT_NE(std::string(e.what()).find("missing.srt"), std::string::npos);
  }
  // A failing writer leaves no file behind.
  EXPECT_THROW(write_file_atomic(dir / "b.srt",
                                 [](std::ostream&) { throw Error(ErrorKind::kIo, "boom"); }),
               Error);
  EXPECT_FALSE(std::filesystem::exists(dir / "b.srt"));
}

}  // namespace
}  // namespace srt4d
