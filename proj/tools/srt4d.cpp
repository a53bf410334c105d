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

// srt4d: synthesize, convert, sweep, benchmark and inspect radar tensors.

#include <omp.h>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "srt4d/bench_harness.hpp"
#include "srt4d/error.hpp"
#include "srt4d/fmcw.hpp"
#include "srt4d/pool.hpp"
#include "srt4d/resample.hpp"
#include "srt4d/srt_io.hpp"

namespace fs = std::filesystem;
using namespace srt4d;

namespace {

// Flag values that fail validation before any work starts.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RoiFlags {
  std::vector<double> min{0.0, -16.0, -2.0};
  std::vector<double> max{72.0, 16.0, 7.6};
  double voxel = 0.4;
  std::string interp = "trilinear";
  int threads = 0;

  void add_to(CLI::App& app, int default_threads) {
    threads = default_threads;
    app.add_option("--roi-min", min, "RoI lower corner x,y,z in meters")
        ->delimiter(',')
        ->expected(3)
        ->capture_default_str();
    app.add_option("--roi-max", max, "RoI upper corner x,y,z in meters")
        ->delimiter(',')
        ->expected(3)
        ->capture_default_str();
    app.add_option("--voxel", voxel, "Cubic voxel edge in meters")->capture_default_str();
    app.add_option("--interp", interp, "Polar-to-Cartesian interpolation")
        ->check(CLI::IsMember({"trilinear", "nearest"}))
        ->capture_default_str();
    app.add_option("--threads", threads, "Worker threads (0 = all cores)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
  }

  CartesianRoi roi() const {
    CartesianRoi r{{min[0], min[1], min[2]}, {max[0], max[1], max[2]}, voxel};
    try {
      (void)voxel_count(r);
    } catch (const Error& e) {
      throw UsageError(std::string("invalid RoI: ") + e.what());
    }
    return r;
  }

  Interpolation interpolation() const {
    return interp == "nearest" ? Interpolation::kNearest : Interpolation::kTrilinear;
  }

  int thread_count() const { return threads == 0 ? omp_get_max_threads() : threads; }
};

void check_density_flag(double density) {
  try {
    check_density(density);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

void require_files(const std::vector<std::string>& inputs) {
  for (const std::string& in : inputs) {
    if (!fs::is_regular_file(in)) throw Error(ErrorKind::kIo, in + ": no such file");
  }
}

std::vector<fs::path> to_paths(const std::vector<std::string>& in) {
  return {in.begin(), in.end()};
}

// --- synth -----------------------------------------------------------------

struct SynthArgs {
  std::string scene;
  std::string out;
  std::optional<std::uint64_t> seed;
  int threads = 0;
};

void run_synth(const SynthArgs& a) {
  SceneDocument doc = load_scene_file(a.scene);
  if (a.seed) doc.scene.seed = *a.seed;
  if (a.threads > 0) omp_set_num_threads(a.threads);
  const DenseTensorF frame = synthesize_frame(doc.scene, doc.chirp, doc.array, doc.grid);
  write_raw_dense_file(a.out, frame, doc.grid);
}

// --- convert ---------------------------------------------------------------

struct ConvertArgs {
  std::vector<std::string> inputs;
  std::string out;
  std::string out_dir;
  double density = 5.0;
  RoiFlags roi;
};

void run_convert(const ConvertArgs& a) {
  if (!a.out.empty() && a.inputs.size() != 1) {
    throw UsageError("--out takes a single input; use --out-dir for several");
  }
  if (!a.out.empty() && !a.out_dir.empty()) throw UsageError("--out and --out-dir are exclusive");
  check_density_flag(a.density);
  const CartesianRoi roi = a.roi.roi();
  require_files(a.inputs);

  const auto target = [&](const fs::path& in) {
    if (!a.out.empty()) return fs::path(a.out);
    return srt_path_for(in, a.out_dir.empty() ? in.parent_path() : fs::path(a.out_dir), a.density);
  };
  if (!a.out_dir.empty()) fs::create_directories(a.out_dir);

  if (a.inputs.size() == 1) {
    omp_set_num_threads(a.roi.thread_count());
    const RawDenseFrame frame = read_raw_dense_file(a.inputs[0]);
    const ResamplePlan plan(frame.grid, roi, a.roi.interpolation());
    write_srt_file(target(a.inputs[0]), convert_frame(frame, plan, a.density));
    return;
  }

  // Several frames: one frame per thread, kernels serial.
  SweepOptions opts;
  opts.roi = roi;
  opts.interpolation = a.roi.interpolation();
  opts.densities = {a.density};
  opts.threads = a.roi.thread_count();
  const int n = static_cast<int>(a.inputs.size());
  std::vector<std::string> errors(n);
  omp_set_num_threads(1);
#pragma omp parallel for schedule(dynamic, 1) num_threads(opts.threads)
  for (int i = 0; i < n; ++i) {
    try {
      const RawDenseFrame frame = read_raw_dense_file(a.inputs[i]);
      const ResamplePlan plan(frame.grid, roi, opts.interpolation);
      write_srt_file(target(a.inputs[i]), convert_frame(frame, plan, a.density));
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  for (const std::string& e : errors) {
    if (!e.empty()) throw Error(ErrorKind::kIo, e);
  }
}

// --- sweep -----------------------------------------------------------------

struct SweepArgs {
  std::vector<std::string> inputs;
  std::string out_dir = ".";
  std::vector<double> densities = default_densities();
  RoiFlags roi;
};

int run_sweep_cmd(const SweepArgs& a) {
  SweepOptions opts;
  opts.roi = a.roi.roi();
  opts.interpolation = a.roi.interpolation();
  opts.densities = a.densities;
  opts.out_dir = a.out_dir;
  opts.threads = a.roi.thread_count();
  try {
    for (std::size_t i = 0; i < opts.densities.size(); ++i) {
      check_density(opts.densities[i]);
      if (i > 0 && !(opts.densities[i] > opts.densities[i - 1])) {
        throw UsageError("--densities must be strictly increasing");
      }
    }
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  const SweepReport report = run_sweep(to_paths(a.inputs), opts);
  emit_plot_data(report, a.out_dir);
  write_sweep_csv(report, std::cout);
  for (const std::string& f : report.failures) std::cerr << "srt4d: skipped: " << f << '\n';
  return report.failures.empty() ? 0 : 1;
}

// --- bench -----------------------------------------------------------------

struct BenchArgs {
  std::vector<std::string> inputs;
  std::string srt_dir;
  std::string out_dir = ".";
  double density = 5.0;
  std::size_t repetitions = 5;
  std::size_t warmup = 1;
  RoiFlags roi;
};

void run_bench(const BenchArgs& a) {
  check_density_flag(a.density);
  if (a.repetitions < 1) throw UsageError("--repetitions must be >= 1");
  ThroughputOptions opts;
  opts.roi = a.roi.roi();
  opts.interpolation = a.roi.interpolation();
  opts.density_percent = a.density;
  opts.repetitions = a.repetitions;
  opts.warmup = a.warmup;
  opts.srt_dir = a.srt_dir;
  opts.threads = a.roi.thread_count();
  require_files(a.inputs);
  const ThroughputResult r = run_throughput(to_paths(a.inputs), opts);
  emit_plot_data(r, a.out_dir);
  std::printf("online   %.4g frames/s\n", r.online.frames_per_second);
  std::printf("offline  %.4g frames/s\n", r.offline.frames_per_second);
  std::printf("speedup  %.4g (full-scale training reference %.3g)\n", r.offline.speedup_ratio,
              kReferenceSpeedup);
}

// --- inspect ---------------------------------------------------------------

struct PowerStats {
  double min = 0, max = 0, mean = 0;
  std::size_t count = 0;
};

template <typename Range>
PowerStats stats_of(const Range& values) {
  PowerStats s;
  double sum = 0;
  s.min = std::numeric_limits<double>::infinity();
  s.max = -s.min;
  for (double v : values) {
    s.min = std::min(s.min, v);
    s.max = std::max(s.max, v);
    sum += v;
    ++s.count;
  }
  if (s.count == 0) {
    s.min = s.max = 0;
  } else {
    s.mean = sum / static_cast<double>(s.count);
  }
  return s;
}

nlohmann::ordered_json vec_json(const Vec3& v) { return {v.x, v.y, v.z}; }

nlohmann::ordered_json axis_json(const AxisSpec& a) {
  return {{"count", a.count}, {"start", a.start}, {"step", a.step}};
}

nlohmann::ordered_json describe(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, path.string() + ": cannot open");
  char magic[4] = {};
  in.read(magic, 4);
  nlohmann::ordered_json j;
  j["file"] = path.string();
  j["file_bytes"] = fs::file_size(path);
  if (std::string_view(magic, 4) == "4DRT") {
    const RawDenseFrame f = read_raw_dense_file(path);
    const auto values = f.tensor.values();
    const PowerStats s = stats_of(values);
    j["format"] = "rt4";
    j["shape"] = f.tensor.shape();
    j["axes"] = {{"doppler", axis_json(f.grid.doppler)},
                 {"range", axis_json(f.grid.range)},
                 {"azimuth", axis_json(f.grid.azimuth)},
                 {"elevation", axis_json(f.grid.elevation)}};
    j["cell_count"] = s.count;
    j["power"] = {{"min", s.min}, {"max", s.max}, {"mean", s.mean}};
    return j;
  }
  const SparseRadarTensor t = read_srt_file(path);
  std::vector<double> powers;
  powers.reserve(t.elements.size());
  for (const SparseElement& e : t.elements) powers.push_back(e.power);
  const PowerStats s = stats_of(powers);
  const VoxelCount c = voxel_count(t.roi);
  j["format"] = "srt";
  j["roi_min"] = vec_json(t.roi.min);
  j["roi_max"] = vec_json(t.roi.max);
  j["voxel"] = t.roi.voxel;
  j["voxel_count"] = {c.nx, c.ny, c.nz};
  j["density_percent"] = t.density_percent;
  j["valid_count"] = t.source_valid_count;
  j["element_count"] = t.elements.size();
  j["power"] = {{"min", s.min}, {"max", s.max}, {"mean", s.mean}};
  return j;
}

void print_text(const nlohmann::ordered_json& j, const std::string& prefix = "") {
  for (const auto& [key, value] : j.items()) {
    if (value.is_object()) {
      print_text(value, prefix + key + ".");
    } else {
      std::cout << prefix << key << ": " << (value.is_string() ? value.get<std::string>()
                                                                : value.dump())
                << '\n';
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"srt4d: dense 4D radar tensors to sparse top-N% tensors"};
  app.require_subcommand(1);

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "Render a scene file into a dense .rt4 frame");
  synth_cmd->add_option("--scene", synth.scene, "Scene JSON file")->required()->check(CLI::ExistingFile);
  synth_cmd->add_option("--out", synth.out, "Output .rt4 file")->required();
  synth_cmd->add_option("--seed", synth.seed, "Noise seed (overrides the scene file)");
  synth_cmd->add_option("--threads", synth.threads, "Worker threads (0 = all cores)")
      ->check(CLI::NonNegativeNumber);

  ConvertArgs convert;
  auto* convert_cmd = app.add_subcommand("convert", "Convert .rt4 frames to .srt at one density");
  convert_cmd->add_option("inputs", convert.inputs, "Input .rt4 files")->required();
  convert_cmd->add_option("--out", convert.out, "Output file (single input only)");
  convert_cmd->add_option("--out-dir", convert.out_dir,
                          "Directory for <stem>_d<N>.srt outputs (default: next to input)");
  convert_cmd->add_option("--density", convert.density, "Percent of valid voxels to keep")
      ->capture_default_str();
  convert.roi.add_to(*convert_cmd, 0);

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Convert frames at a list of densities");
  sweep_cmd->add_option("inputs", sweep.inputs, "Input .rt4 files")->required();
  sweep_cmd->add_option("--out-dir", sweep.out_dir, "Directory for .srt files and CSV")
      ->capture_default_str();
  sweep_cmd->add_option("--densities", sweep.densities, "Strictly increasing density list")
      ->delimiter(',')
      ->capture_default_str();
  sweep.roi.add_to(*sweep_cmd, 1);

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Compare online dense processing with .srt loading");
  bench_cmd->add_option("inputs", bench.inputs, "Input .rt4 files")->required();
  bench_cmd->add_option("--srt-dir", bench.srt_dir,
                        "Where the converted .srt files are (default: next to input)");
  bench_cmd->add_option("--out-dir", bench.out_dir, "Directory for throughput CSV")
      ->capture_default_str();
  bench_cmd->add_option("--density", bench.density, "Density of the converted files")
      ->capture_default_str();
  bench_cmd->add_option("--repetitions", bench.repetitions, "Timed passes per mode")
      ->capture_default_str();
  bench_cmd->add_option("--warmup", bench.warmup, "Untimed passes per mode")
      ->capture_default_str();
  bench.roi.add_to(*bench_cmd, 1);

  std::string inspect_path;
  bool inspect_json = false;
  auto* inspect_cmd = app.add_subcommand("inspect", "Print header fields and power statistics");
  inspect_cmd->add_option("file", inspect_path, ".srt or .rt4 file")->required();
  inspect_cmd->add_flag("--json", inspect_json, "Emit JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "srt4d: usage error: " << e.what() << " (see --help)\n";
    return 2;
  }

  try {
    if (*synth_cmd) {
      run_synth(synth);
    } else if (*convert_cmd) {
      run_convert(convert);
    } else if (*sweep_cmd) {
      return run_sweep_cmd(sweep);
    } else if (*bench_cmd) {
      run_bench(bench);
    } else if (*inspect_cmd) {
      const nlohmann::ordered_json j = describe(inspect_path);
      if (inspect_json) {
        std::cout << j.dump(2) << '\n';
      } else {
        print_text(j);
      }
    }
  } catch (const UsageError& e) {
    std::cerr << "srt4d: usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "srt4d: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
