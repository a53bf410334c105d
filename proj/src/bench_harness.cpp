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

#include "srt4d/bench_harness.hpp"

#include <omp.h>
#include <unistd.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <ctime>
#include <exception>
#include <istream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "srt4d/doppler.hpp"
#include "srt4d/error.hpp"

namespace srt4d {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Kernels inside a benchmark run serially; any parallelism is across frames.
class SerialKernels {
 public:
  SerialKernels() : saved_(omp_get_max_threads()) { omp_set_num_threads(1); }
  ~SerialKernels() { omp_set_num_threads(saved_); }
  SerialKernels(const SerialKernels&) = delete;
  SerialKernels& operator=(const SerialKernels&) = delete;

 private:
  int saved_;
};

void check_densities(const std::vector<double>& densities) {
  if (densities.empty()) fail(ErrorKind::kInvalidArgument, "density list is empty");
  for (std::size_t i = 0; i < densities.size(); ++i) {
    check_density(densities[i]);
    if (i > 0 && !(densities[i] > densities[i - 1])) {
      fail(ErrorKind::kInvalidArgument, "densities must be strictly increasing");
    }
  }
}

struct FrameOutcome {
  std::optional<std::string> failure;
  std::vector<std::uint64_t> counts;
  std::vector<std::uint64_t> bytes;
  std::vector<double> seconds;
};

FrameOutcome sweep_frame(const fs::path& frame_path, const SweepOptions& options) {
  FrameOutcome outcome;
  try {
    const auto t0 = Clock::now();
    const RawDenseFrame frame = read_raw_dense_file(frame_path);
    const ResamplePlan plan(frame.grid, options.roi, options.interpolation);
    const CartesianField field = plan.apply(reduce_doppler(frame.tensor, frame.grid));
    const double prepare = seconds_since(t0);
    for (double density : options.densities) {
      const auto t1 = Clock::now();
      const SparseRadarTensor sparse = top_percent_pool(field, density);
      write_srt_file(srt_path_for(frame_path, options.out_dir, density), sparse);
      outcome.seconds.push_back(prepare + seconds_since(t1));
      outcome.counts.push_back(sparse.elements.size());
      outcome.bytes.push_back(srt_file_size(sparse.elements.size()));
    }
  } catch (const std::exception& e) {
    outcome.failure = e.what();
  }
  return outcome;
}

// Runs fn(i) for every frame index; the first exception is rethrown after
// the loop since it cannot cross the parallel region.
template <typename Fn>
void for_each_frame(int n, int threads, Fn&& fn) {
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (int i = 0; i < n; ++i) {
    try {
      fn(i);
    } catch (...) {
#pragma omp critical(srt4d_frame_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Runs `pass` warmup + repetitions times and returns the median timed pass.
template <typename Pass>
double time_passes(std::size_t warmup, std::size_t repetitions, Pass&& pass) {
  for (std::size_t i = 0; i < warmup; ++i) pass();
  std::vector<double> times;
  for (std::size_t i = 0; i < repetitions; ++i) {
    const auto t0 = Clock::now();
    pass();
    times.push_back(seconds_since(t0));
  }
  return median(std::move(times));
}

ThroughputReport make_report(ThroughputMode mode, std::size_t frames, double seconds) {
  ThroughputReport r;
  r.mode = mode;
  r.frames_processed = frames;
  r.wall_seconds = seconds;
  r.frames_per_second = static_cast<double>(frames) / seconds;
  return r;
}

const char* mode_name(ThroughputMode mode) {
  return mode == ThroughputMode::kOnline ? "online" : "offline";
}

double parse_number(const std::string& field, std::size_t line) {
  double v = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    fail(ErrorKind::kInvalidArgument,
         "sweep csv line " + std::to_string(line) + ": bad number '" + field + "'");
  }
  return v;
}

void write_json(const fs::path& path, const nlohmann::ordered_json& doc) {
  write_file_atomic(path, [&](std::ostream& out) { out << doc.dump(2) << '\n'; });
}

}  // namespace

std::vector<double> default_densities() { return {0.01, 0.1, 1, 3, 5, 10, 15, 20, 30, 50}; }

fs::path srt_path_for(const fs::path& frame, const fs::path& out_dir, double density_percent) {
  return out_dir / (frame.stem().string() + "_d" + format_number(density_percent) + ".srt");
}

SparseRadarTensor convert_frame(const RawDenseFrame& frame, const ResamplePlan& plan,
                                double density_percent) {
  return top_percent_pool(plan.apply(reduce_doppler(frame.tensor, frame.grid)), density_percent);
}

SweepReport run_sweep(const std::vector<fs::path>& frames, const SweepOptions& options) {
  if (frames.empty()) fail(ErrorKind::kInvalidArgument, "no input frames");
  check_densities(options.densities);
  if (options.threads < 1) fail(ErrorKind::kInvalidArgument, "threads must be >= 1");
  (void)voxel_count(options.roi);
  fs::create_directories(options.out_dir);

  SweepReport report;
  report.machine_label = machine_label();
  report.timestamp = utc_timestamp();

  std::vector<FrameOutcome> outcomes(frames.size());
  {
    SerialKernels serial;
    const int n = static_cast<int>(frames.size());
    for_each_frame(n, options.threads, [&](int i) { outcomes[i] = sweep_frame(frames[i], options); });
  }

  const std::size_t nd = options.densities.size();
  std::vector<double> counts(nd), bytes(nd), seconds(nd);
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const FrameOutcome& o = outcomes[i];
    if (o.failure) {
      report.failures.push_back(*o.failure);
      continue;
    }
    ++report.frames_converted;
    for (std::size_t d = 0; d < nd; ++d) {
      counts[d] += static_cast<double>(o.counts[d]);
      bytes[d] += static_cast<double>(o.bytes[d]);
      seconds[d] += o.seconds[d];
    }
  }
  if (report.frames_converted == 0) {
    fail(ErrorKind::kIo, "no frame converted; first failure: " + report.failures.front());
  }
  const double m = static_cast<double>(report.frames_converted);
  for (std::size_t d = 0; d < nd; ++d) {
    report.rows.push_back({options.densities[d], counts[d] / m, bytes[d] / m, seconds[d] / m});
  }
  return report;
}

std::vector<SparsePoint> materialize(const SparseRadarTensor& tensor) {
  const CartesianRoi& roi = tensor.roi;
  std::vector<SparsePoint> points;
  points.reserve(tensor.elements.size());
  for (const SparseElement& e : tensor.elements) {
    points.push_back({static_cast<float>(roi.min.x + (e.ix + 0.5) * roi.voxel),
                      static_cast<float>(roi.min.y + (e.iy + 0.5) * roi.voxel),
                      static_cast<float>(roi.min.z + (e.iz + 0.5) * roi.voxel), e.power});
  }
  return points;
}

ThroughputResult run_throughput(const std::vector<fs::path>& frames,
                                const ThroughputOptions& options) {
  if (frames.empty()) fail(ErrorKind::kInvalidArgument, "no input frames");
  check_density(options.density_percent);
  if (options.repetitions < 1) fail(ErrorKind::kInvalidArgument, "repetitions must be >= 1");
  if (options.threads < 1) fail(ErrorKind::kInvalidArgument, "threads must be >= 1");
  (void)voxel_count(options.roi);

  std::vector<fs::path> sparse_paths;
  for (const fs::path& f : frames) {
    const fs::path dir = options.srt_dir.empty() ? f.parent_path() : options.srt_dir;
    fs::path p = srt_path_for(f, dir, options.density_percent);
    if (!fs::exists(p)) {
      fail(ErrorKind::kIo, "missing pre-converted file " + p.string() + "; run `srt4d convert --density " +
                               format_number(options.density_percent) + "` or `srt4d sweep` first");
    }
    sparse_paths.push_back(std::move(p));
  }

  SerialKernels serial;
  const int n = static_cast<int>(frames.size());

  // One plan per distinct grid, built during warm-up like any cache.
  std::vector<std::pair<PolarGrid4D, std::shared_ptr<const ResamplePlan>>> plans;
  const auto plan_for = [&](const PolarGrid4D& grid) {
    std::shared_ptr<const ResamplePlan> plan;
#pragma omp critical(srt4d_plan_cache)
    {
      for (const auto& [g, p] : plans) {
        if (g == grid) plan = p;
      }
      if (!plan) {
        plan = std::make_shared<const ResamplePlan>(grid, options.roi, options.interpolation);
        plans.emplace_back(grid, plan);
      }
    }
    return plan;
  };

  std::vector<std::uint64_t> sink(frames.size());
  const auto online_pass = [&] {
    for_each_frame(n, options.threads, [&](int i) {
      const RawDenseFrame frame = read_raw_dense_file(frames[i]);
      sink[i] = convert_frame(frame, *plan_for(frame.grid), options.density_percent)
                    .elements.size();
    });
  };
  const auto offline_pass = [&] {
    for_each_frame(n, options.threads, [&](int i) {
      sink[i] = materialize(read_srt_file(sparse_paths[i])).size();
    });
  };

  ThroughputResult result;
  result.density_percent = options.density_percent;
  result.repetitions = options.repetitions;
  result.machine_label = machine_label();
  result.timestamp = utc_timestamp();

  result.online = make_report(ThroughputMode::kOnline, frames.size(),
                              time_passes(options.warmup, options.repetitions, online_pass));
  result.offline = make_report(ThroughputMode::kOffline, frames.size(),
                               time_passes(options.warmup, options.repetitions, offline_pass));
  const double ratio = result.offline.frames_per_second / result.online.frames_per_second;
  result.online.speedup_ratio = ratio;
  result.offline.speedup_ratio = ratio;

  double bytes = 0;
  for (std::uint64_t count : sink) bytes += static_cast<double>(srt_file_size(count));
  result.offline_bytes_per_frame = bytes / n;
  return result;
}

void write_sweep_csv(const SweepReport& report, std::ostream& out) {
  out << "density_percent,element_count,file_bytes,convert_seconds\n";
  for (const SweepRow& r : report.rows) {
    out << format_number(r.density_percent) << ',' << format_number(r.element_count) << ','
        << format_number(r.file_bytes) << ',' << format_number(r.convert_seconds) << '\n';
  }
}

std::vector<SweepRow> read_sweep_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "density_percent,element_count,file_bytes,convert_seconds") {
    fail(ErrorKind::kInvalidArgument, "sweep csv: unexpected header");
  }
  std::vector<SweepRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    for (std::string f; std::getline(ss, f, ',');) fields.push_back(f);
    if (fields.size() != 4) {
      fail(ErrorKind::kInvalidArgument,
           "sweep csv line " + std::to_string(line_no) + ": expected 4 fields");
    }
    rows.push_back({parse_number(fields[0], line_no), parse_number(fields[1], line_no),
                    parse_number(fields[2], line_no), parse_number(fields[3], line_no)});
  }
  return rows;
}

void write_throughput_csv(const ThroughputResult& result, std::ostream& out) {
  out << "mode,frames_per_second,speedup_ratio\n";
  for (const ThroughputReport* r : {&result.online, &result.offline}) {
    out << mode_name(r->mode) << ',' << format_number(r->frames_per_second) << ','
        << format_number(r->speedup_ratio) << '\n';
  }
}

void emit_plot_data(const SweepReport& report, const fs::path& dir) {
  fs::create_directories(dir);
  write_file_atomic(dir / "sweep.csv", [&](std::ostream& out) { write_sweep_csv(report, out); });
  nlohmann::ordered_json meta;
  meta["machine"] = report.machine_label;
  meta["timestamp"] = report.timestamp;
  meta["frames_converted"] = report.frames_converted;
  meta["failures"] = report.failures;
  write_json(dir / "sweep.meta.json", meta);
}

void emit_plot_data(const ThroughputResult& result, const fs::path& dir) {
  fs::create_directories(dir);
  write_file_atomic(dir / "throughput.csv",
                    [&](std::ostream& out) { write_throughput_csv(result, out); });
  nlohmann::ordered_json meta;
  meta["machine"] = result.machine_label;
  meta["timestamp"] = result.timestamp;
  meta["density_percent"] = result.density_percent;
  meta["repetitions"] = result.repetitions;
  for (const ThroughputReport* r : {&result.online, &result.offline}) {
    meta[mode_name(r->mode)] = {{"frames_processed", r->frames_processed},
                                {"wall_seconds", r->wall_seconds},
                                {"frames_per_second", r->frames_per_second}};
  }
  meta["speedup_ratio"] = result.offline.speedup_ratio;
  meta["offline_bytes_per_frame"] = result.offline_bytes_per_frame;
  meta["reference"] = {{"sparse_iterations_per_second", kReferenceSparseRate},
                       {"dense_iterations_per_second", kReferenceDenseRate},
                       {"speedup_ratio", kReferenceSpeedup}};
  write_json(dir / "throughput.meta.json", meta);
}

std::string machine_label() {
  char host[256] = {};
  if (gethostname(host, sizeof host - 1) != 0) host[0] = '\0';
  return std::string(host[0] ? host : "unknown") + " (" +
         std::to_string(std::thread::hardware_concurrency()) + " hw threads)";
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace srt4d
