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

#include <fstream>
#include <iterator>
#include <sstream>

#include "json.hpp"
#include "srt4d/bench_harness.hpp"
#include "srt4d/error.hpp"
#include "srt4d/srt_io.hpp"
#include "test_util.hpp"

namespace srt4d {
namespace {

namespace fs = std::filesystem;
using testing::Rng;

constexpr CartesianRoi kRoi{{4, -8, -2}, {40, 8, 2}, 0.4};  // 90 x 40 x 10 voxels

PolarGrid4D frame_grid() { return testing::small_polar_grid(40, 24, 10); }

fs::path write_frame(const testing::TempDir& dir, const std::string& name, std::uint64_t seed) {
  const PolarGrid4D g = frame_grid();
  Rng rng(seed);
  std::vector<float> v(4 * 40 * 24 * 10);
  for (auto& x : v) x = static_cast<float>(rng.uniform(0, 1));
  const fs::path p = dir / name;
  write_raw_dense_file(p, DenseTensorF({4, 40, 24, 10}, v), g);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

TEST(Densities, DefaultList) {
  EXPECT_EQ(default_densities(), (std::vector<double>{0.01, 0.1, 1, 3, 5, 10, 15, 20, 30, 50}));
  EXPECT_EQ(format_number(0.01), "0.01");
  EXPECT_EQ(format_number(5), "5");
  EXPECT_EQ(srt_path_for("/a/b/frame.rt4", "/out", 0.1), fs::path("/out/frame_d0.1.srt"));
}

TEST(Sweep, SingleDensityRow) {
  testing::TempDir dir;
  const fs::path f = write_frame(dir, "f.rt4", 1);
  SweepOptions opts;
  opts.roi = kRoi;
  opts.densities = {10};
  opts.out_dir = dir / "out";
  const SweepReport r = run_sweep({f}, opts);
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_EQ(r.frames_converted, 1u);
  EXPECT_EQ(r.rows[0].file_bytes, 80 + 10 * r.rows[0].element_count);
  const fs::path out = dir / "out" / "f_d10.srt";
  ASSERT_TRUE(fs::exists(out));
  EXPECT_EQ(static_cast<double>(fs::file_size(out)), r.rows[0].file_bytes);
  EXPECT_FALSE(r.machine_label.empty());
  EXPECT_EQ(r.timestamp.size(), 20u);
}

TEST(Sweep, DefaultDensitiesTrend) {
  testing::TempDir dir;
  const fs::path f = write_frame(dir, "f.rt4", 2);
  SweepOptions opts;
  opts.roi = kRoi;
  opts.out_dir = dir.path();
  const SweepReport r = run_sweep({f}, opts);
  ASSERT_EQ(r.rows.size(), 10u);
  const SparseRadarTensor t50 = read_srt_file(dir / "f_d50.srt");
  const std::uint64_t valid = t50.source_valid_count;
  ASSERT_GT(valid, 10000u);
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    EXPECT_EQ(r.rows[i].element_count,
              static_cast<double>(testing::rational_retained_count(testing::table_densities()[i], valid)));
    if (i > 0) {
      EXPECT_GT(r.rows[i].file_bytes, r.rows[i - 1].file_bytes);
    }
  }
  const double e5 = r.rows[4].element_count, e50 = r.rows[9].element_count;
  EXPECT_LE(std::abs(e50 - 10 * e5), 10.0);
}

TEST(Sweep, Errors) {
  testing::TempDir dir;
  const fs::path f = write_frame(dir, "f.rt4", 3);
  SweepOptions opts;
  opts.roi = kRoi;
  opts.out_dir = dir.path();
  opts.densities = {};
  EXPECT_THROW(run_sweep({f}, opts), Error);
  opts.densities = {5, 5};
  EXPECT_THROW(run_sweep({f}, opts), Error);
  opts.densities = {5, 1};
  EXPECT_THROW(run_sweep({f}, opts), Error);
  opts.densities = {5, 101};
  EXPECT_THROW(run_sweep({f}, opts), Error);
  opts.densities = {5};
  EXPECT_THROW(run_sweep({}, opts), Error);
  EXPECT_THROW(run_sweep({dir / "nope.rt4"}, opts), Error);
}

TEST(Sweep, BadFileReportedRunContinues) {
  testing::TempDir dir;
  const fs::path good = write_frame(dir, "good.rt4", 4);
  std::ofstream(dir / "bad.rt4") << "not a frame";
  SweepOptions opts;
  opts.roi = kRoi;
  opts.densities = {1, 5};
  opts.out_dir = dir.path();
  const SweepReport r = run_sweep({dir / "bad.rt4", good, dir / "missing.rt4"}, opts);
  EXPECT_EQ(r.frames_converted, 1u);
  ASSERT_EQ(r.failures.size(), 2u);
  EXPECT_NE(r.failures[0].find("bad.rt4"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "good_d5.srt"));
}

TEST(Sweep, OutputsIndependentOfThreads) {
  testing::TempDir dir;
  const std::vector<fs::path> frames = {write_frame(dir, "a.rt4", 5), write_frame(dir, "b.rt4", 6),
                                        write_frame(dir, "c.rt4", 7)};
  SweepOptions opts;
  opts.roi = kRoi;
  opts.densities = {0.1, 5, 50};
  opts.out_dir = dir / "t1";
  const SweepReport r1 = run_sweep(frames, opts);
  opts.threads = 3;
  opts.out_dir = dir / "t3";
  const SweepReport r3 = run_sweep(frames, opts);
  for (const char* stem : {"a", "b", "c"})
    for (const char* d : {"0.1", "5", "50"}) {
      const std::string name = std::string(stem) + "_d" + d + ".srt";
      EXPECT_EQ(slurp(dir / "t1" / name), slurp(dir / "t3" / name)) << name;
    }
  for (std::size_t i = 0; i < r1.rows.size(); ++i) {
    EXPECT_EQ(r1.rows[i].element_count, r3.rows[i].element_count);
    EXPECT_EQ(r1.rows[i].file_bytes, r3.rows[i].file_bytes);
  }
}

TEST(PlotData, SweepCsvRoundTripAndHeaders) {
  SweepReport r;
  for (double d : default_densities()) r.rows.push_back({d, d * 123.456, 80 + 10 * d * 123.456, 1.0 / (d + 3)});
  std::ostringstream out;
  write_sweep_csv(r, out);
  const std::string csv = out.str();
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 11);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "density_percent,element_count,file_bytes,convert_seconds");
  std::istringstream in(csv);
  EXPECT_EQ(read_sweep_csv(in), r.rows);

  std::ostringstream empty;
  write_sweep_csv(SweepReport{}, empty);
  EXPECT_EQ(empty.str(), "density_percent,element_count,file_bytes,convert_seconds\n");
  std::istringstream bad("density_percent,element_count\n1,2\n");
  EXPECT_THROW(read_sweep_csv(bad), Error);
}

TEST(PlotData, EmitWritesCsvAndMeta) {
  testing::TempDir dir;
  SweepReport r;
  r.rows = {{5, 100, 1080, 0.5}};
  r.machine_label = "box";
  r.timestamp = "2026-01-01T00:00:00Z";
  emit_plot_data(r, dir.path());
  EXPECT_EQ(slurp(dir / "sweep.csv"), "density_percent,element_count,file_bytes,convert_seconds\n5,100,1080,0.5\n");
  const auto meta = nlohmann::json::parse(slurp(dir / "sweep.meta.json"));
  EXPECT_EQ(meta["machine"], "box");

  ThroughputResult t;
  t.online = {ThroughputMode::kOnline, 4, 2.0, 2.0, 3.0};
  t.offline = {ThroughputMode::kOffline, 4, 2.0 / 3, 6.0, 3.0};
  emit_plot_data(t, dir.path());
  EXPECT_EQ(slurp(dir / "throughput.csv"), "mode,frames_per_second,speedup_ratio\nonline,2,3\noffline,6,3\n");
  const auto tmeta = nlohmann::json::parse(slurp(dir / "throughput.meta.json"));
  EXPECT_EQ(tmeta["reference"]["speedup_ratio"], 17.1);
  EXPECT_EQ(tmeta["reference"]["sparse_iterations_per_second"], 8.04);
  EXPECT_EQ(tmeta["reference"]["dense_iterations_per_second"], 0.47);
}

TEST(Throughput, MissingConvertedFilesError) {
  testing::TempDir dir;
  const fs::path f = write_frame(dir, "f.rt4", 8);
  ThroughputOptions opts;
  opts.roi = kRoi;
  try {
    run_throughput({f}, opts);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("convert"), std::string::npos) << e.what();
  }
}

TEST(Throughput, ReportsConsistentRates) {
  testing::TempDir dir;
  const std::vector<fs::path> frames = {write_frame(dir, "a.rt4", 9), write_frame(dir, "b.rt4", 10)};
  SweepOptions sweep;
  sweep.roi = kRoi;
  sweep.densities = {5};
  sweep.out_dir = dir / "srt";
  const SweepReport s = run_sweep(frames, sweep);
  ThroughputOptions opts;
  opts.roi = kRoi;
  opts.srt_dir = dir / "srt";
  opts.repetitions = 3;
  const ThroughputResult r = run_throughput(frames, opts);
  for (const ThroughputReport* m : {&r.online, &r.offline}) {
    EXPECT_EQ(m->frames_processed, 2u);
    EXPECT_DOUBLE_EQ(m->frames_per_second, 2 / m->wall_seconds);
    EXPECT_GT(m->speedup_ratio, 0);
  }
  EXPECT_DOUBLE_EQ(r.online.speedup_ratio, r.offline.frames_per_second / r.online.frames_per_second);
  EXPECT_EQ(r.offline_bytes_per_frame, s.rows[0].file_bytes);
  EXPECT_GT(r.offline.frames_per_second, r.online.frames_per_second);
}

TEST(Materialize, VoxelCenters) {
  SparseRadarTensor t;
  t.roi = {{1, 2, 3}, {3, 4, 5}, 0.5};
  t.density_percent = 100;
  t.source_valid_count = 1;
  t.elements = {{1, 2, 3, 4.0f}};
  const auto pts = materialize(t);
  ASSERT_EQ(pts.size(), 1u);
  EXPECT_FLOAT_EQ(pts[0].x, 1.75f);
  EXPECT_FLOAT_EQ(pts[0].y, 3.25f);
  EXPECT_FLOAT_EQ(pts[0].z, 4.75f);
  EXPECT_EQ(pts[0].power, 4.0f);
}

}  // namespace
}  // namespace srt4d
