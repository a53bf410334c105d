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

#include "srt4d/fmcw.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "srt4d/error.hpp"
#include "srt4d/fft.hpp"
#include "srt4d/noise.hpp"
#include "srt4d/philox.hpp"
#include "srt4d/resample.hpp"

namespace srt4d {

using std::numbers::pi;

void ChirpConfig::validate() const {
  const bool positive = carrier_wavelength > 0 && slope > 0 && sample_rate > 0 &&
                        chirp_interval > 0 && std::isfinite(carrier_wavelength) &&
                        std::isfinite(slope) && std::isfinite(sample_rate) &&
                        std::isfinite(chirp_interval);
  if (!positive) fail(ErrorKind::kInvalidArgument, "chirp parameters must be positive");
  if (!is_power_of_two(samples_per_chirp) || samples_per_chirp < 2) {
    fail(ErrorKind::kInvalidArgument, "samples_per_chirp must be a power of two >= 2");
  }
  if (!is_power_of_two(chirps_per_frame)) {
    fail(ErrorKind::kInvalidArgument, "chirps_per_frame must be a power of two");
  }
}

double ChirpConfig::range_resolution() const {
  return kSpeedOfLight * bin_frequency() / (2.0 * slope);
}

double ChirpConfig::max_range() const {
  return static_cast<double>(samples_per_chirp / 2) * range_resolution();
}

double ChirpConfig::velocity_resolution() const {
  return carrier_wavelength / (2.0 * static_cast<double>(chirps_per_frame) * chirp_interval);
}

double ChirpConfig::max_velocity() const { return carrier_wavelength / (4.0 * chirp_interval); }

ChirpConfig ChirpConfig::desk_default() {
  ChirpConfig cfg;
  cfg.sample_rate = 10e6;
  cfg.slope = cfg.sample_rate * kSpeedOfLight / (4.0 * 90.0);
  return cfg;
}

void VirtualArray::validate() const {
  if (!is_power_of_two(azimuth_elements) || !is_power_of_two(elevation_elements)) {
    fail(ErrorKind::kInvalidArgument, "virtual array element counts must be powers of two");
  }
}

void SceneSpec::validate() const {
  if (!(noise_floor >= 0.0) || !std::isfinite(noise_floor)) {
    fail(ErrorKind::kInvalidArgument, "noise floor must be finite and >= 0");
  }
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const PointTarget& t = targets[i];
    const bool finite = std::isfinite(t.position.x) && std::isfinite(t.position.y) &&
                        std::isfinite(t.position.z) && std::isfinite(t.radial_velocity) &&
                        std::isfinite(t.amplitude);
    if (!finite || t.amplitude < 0.0) {
      fail(ErrorKind::kInvalidArgument, "target " + std::to_string(i) + " is malformed");
    }
  }
}

PolarGrid4D make_polar_grid(const ChirpConfig& cfg, const VirtualArray& array,
                            double azimuth_fov_rad, double elevation_fov_rad) {
  cfg.validate();
  array.validate();
  PolarGrid4D g;
  const double dv = cfg.velocity_resolution();
  const auto d = static_cast<double>(cfg.chirps_per_frame);
  g.doppler = {cfg.chirps_per_frame, -(d / 2.0 + 0.5) * dv, dv};
  g.range = {cfg.samples_per_chirp / 2, 0.0, cfg.range_resolution()};
  g.azimuth = {array.azimuth_elements, -azimuth_fov_rad / 2.0,
               azimuth_fov_rad / static_cast<double>(array.azimuth_elements)};
  g.elevation = {array.elevation_elements, -elevation_fov_rad / 2.0,
                 elevation_fov_rad / static_cast<double>(array.elevation_elements)};
  g.validate();
  return g;
}

double beat_frequency(double range_m, const ChirpConfig& cfg) {
  if (!(range_m >= 0.0 && range_m < cfg.max_range())) {
    fail(ErrorKind::kOutOfRange, "target range " + format_number(range_m) +
                                     " m outside unambiguous range [0, " +
                                     format_number(cfg.max_range()) + ")");
  }
  return 2.0 * cfg.slope * range_m / kSpeedOfLight;
}

double doppler_frequency(double radial_velocity, const ChirpConfig& cfg) {
  const double vmax = cfg.max_velocity();
  if (!(radial_velocity >= -vmax && radial_velocity < vmax)) {
    fail(ErrorKind::kOutOfRange, "radial velocity " + format_number(radial_velocity) +
                                     " m/s outside unambiguous interval");
  }
  return 2.0 * radial_velocity / cfg.carrier_wavelength;
}

namespace {

using cf = std::complex<float>;

cf phasor(double phase) { return {static_cast<float>(std::cos(phase)), static_cast<float>(std::sin(phase))}; }

void check_grid(const ChirpConfig& cfg, const VirtualArray& array, const PolarGrid4D& grid) {
  const std::array<std::pair<const char*, std::pair<std::size_t, std::size_t>>, 4> counts{{
      {"doppler", {grid.doppler.count, cfg.chirps_per_frame}},
      {"range", {grid.range.count, cfg.samples_per_chirp / 2}},
      {"azimuth", {grid.azimuth.count, array.azimuth_elements}},
      {"elevation", {grid.elevation.count, array.elevation_elements}},
  }};
  for (const auto& [name, c] : counts) {
    if (c.first != c.second) {
      fail(ErrorKind::kShapeMismatch, std::string(name) + " axis has " +
                                          std::to_string(c.first) + " bins, radar produces " +
                                          std::to_string(c.second));
    }
  }
  const PolarGrid4D ref = make_polar_grid(cfg, array, 1.0, 1.0);
  auto close = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)); };
  if (!close(grid.range.start, ref.range.start) || !close(grid.range.step, ref.range.step)) {
    fail(ErrorKind::kShapeMismatch, "range axis does not match the chirp configuration");
  }
  if (!close(grid.doppler.start, ref.doppler.start) ||
      !close(grid.doppler.step, ref.doppler.step)) {
    fail(ErrorKind::kShapeMismatch, "doppler axis does not match the chirp configuration");
  }
}

struct TargetTerms {
  std::vector<cf> fast;      // per fast-time sample, amplitude folded in
  std::vector<cf> slow;      // per chirp
  std::vector<cf> element;   // per (azimuth, elevation) element
};

// Fast-time twiddle exp(-i pi n / S) moves every tone down half a bin; the
// (-1)^m slow-time sign centers zero Doppler.
std::vector<cf> half_bin_shift(std::size_t samples) {
  std::vector<cf> s(samples);
  for (std::size_t n = 0; n < samples; ++n) {
    s[n] = phasor(-pi * static_cast<double>(n) / static_cast<double>(samples));
  }
  return s;
}

TargetTerms target_terms(const PointTarget& t, const ChirpConfig& cfg, const VirtualArray& array) {
  const PolarPoint p = cart_to_polar(t.position);
  const double fb = beat_frequency(p.range, cfg);
  const double fd = doppler_frequency(t.radial_velocity, cfg);
  const double uy = std::cos(p.elevation) * std::sin(p.azimuth);
  const double uz = std::sin(p.elevation);
  const std::size_t S = cfg.samples_per_chirp;

  TargetTerms terms;
  terms.fast.resize(S);
  for (std::size_t n = 0; n < S; ++n) {
    const double ph = 2.0 * pi * fb * static_cast<double>(n) / cfg.sample_rate -
                      pi * static_cast<double>(n) / static_cast<double>(S);
    terms.fast[n] = phasor(ph) * static_cast<float>(t.amplitude);
  }
  terms.slow.resize(cfg.chirps_per_frame);
  for (std::size_t m = 0; m < cfg.chirps_per_frame; ++m) {
    const double ph = 2.0 * pi * fd * static_cast<double>(m) * cfg.chirp_interval;
    terms.slow[m] = phasor(ph) * ((m & 1u) ? -1.0f : 1.0f);
  }
  terms.element.resize(array.azimuth_elements * array.elevation_elements);
  for (std::size_t a = 0; a < array.azimuth_elements; ++a) {
    for (std::size_t e = 0; e < array.elevation_elements; ++e) {
      terms.element[a * array.elevation_elements + e] =
          phasor(pi * (static_cast<double>(a) * uy + static_cast<double>(e) * uz));
    }
  }
  return terms;
}

constexpr std::size_t kChunk = 64;
constexpr std::size_t kLanes = 16;

}  // namespace

DenseTensorF synthesize_frame(const SceneSpec& scene, const ChirpConfig& cfg,
                              const VirtualArray& array, const PolarGrid4D& grid) {
  scene.validate();
  cfg.validate();
  array.validate();
  grid.validate();
  check_grid(cfg, array, grid);

  const std::size_t D = cfg.chirps_per_frame;
  const std::size_t S = cfg.samples_per_chirp;
  const std::size_t R = S / 2;
  const std::size_t A = array.azimuth_elements;
  const std::size_t E = array.elevation_elements;
  const std::size_t DR = D * R;
  const std::size_t elements = A * E;

  std::vector<TargetTerms> terms;
  terms.reserve(scene.targets.size());
  for (const PointTarget& t : scene.targets) terms.push_back(target_terms(t, cfg, array));
  const std::vector<cf> shift = half_bin_shift(S);
  const Philox4x32::Key key = Philox4x32::key_from_seed(scene.seed);
  const bool noisy = scene.noise_floor > 0.0;

  // Stage 1: per element, range and Doppler FFTs into split (re, im) planes
  // laid out [element][chirp][range bin]. The time-domain block is stored
  // sample-major ([n][m]) so the fast-time FFT runs across all chirps at once.
  std::vector<float> shift_re(S), shift_im(S);
  for (std::size_t n = 0; n < S; ++n) {
    shift_re[n] = shift[n].real();
    shift_im[n] = shift[n].imag();
  }
  std::vector<float> sign(D);
  for (std::size_t m = 0; m < D; ++m) sign[m] = (m & 1u) ? -1.0f : 1.0f;
  std::vector<std::vector<float>> slow_re(terms.size()), slow_im(terms.size());
  for (std::size_t t = 0; t < terms.size(); ++t) {
    for (const cf& v : terms[t].slow) {
      slow_re[t].push_back(v.real());
      slow_im[t].push_back(v.imag());
    }
  }

  const BatchedFft range_fft(S);
  const BatchedFft doppler_fft(D);
  std::vector<float> plane_re(elements * DR);
  std::vector<float> plane_im(elements * DR);

#pragma omp parallel
  {
    std::vector<float> bre(S * D), bim(S * D);
#pragma omp for schedule(static)
    for (std::ptrdiff_t ae_signed = 0; ae_signed < static_cast<std::ptrdiff_t>(elements);
         ++ae_signed) {
      const auto ae = static_cast<std::size_t>(ae_signed);
      if (noisy) {
        fill_complex_gaussian(key, static_cast<std::uint32_t>(ae), 0, S * D / 2,
                              static_cast<float>(scene.noise_floor), bre.data(), bim.data());
        for (std::size_t n = 0; n < S; ++n) {
          const float wr = shift_re[n], wi = shift_im[n];
          float* __restrict xr = bre.data() + n * D;
          float* __restrict xi = bim.data() + n * D;
#pragma omp simd
          for (std::size_t m = 0; m < D; ++m) {
            const float r = (xr[m] * wr - xi[m] * wi) * sign[m];
            const float i = (xr[m] * wi + xi[m] * wr) * sign[m];
            xr[m] = r;
            xi[m] = i;
          }
        }
      } else {
        std::fill(bre.begin(), bre.end(), 0.0f);
        std::fill(bim.begin(), bim.end(), 0.0f);
      }
      for (std::size_t t = 0; t < terms.size(); ++t) {
        const cf el = terms[t].element[ae];
        const float* __restrict sr = slow_re[t].data();
        const float* __restrict si = slow_im[t].data();
        for (std::size_t n = 0; n < S; ++n) {
          const cf w = el * terms[t].fast[n];
          const float wr = w.real(), wi = w.imag();
          float* __restrict xr = bre.data() + n * D;
          float* __restrict xi = bim.data() + n * D;
#pragma omp simd
          for (std::size_t m = 0; m < D; ++m) {
            xr[m] += wr * sr[m] - wi * si[m];
            xi[m] += wr * si[m] + wi * sr[m];
          }
        }
      }
      range_fft.forward(bre.data(), bim.data(), D);
      float* out_re = plane_re.data() + ae * DR;
      float* out_im = plane_im.data() + ae * DR;
      for (std::size_t r = 0; r < R; ++r) {
        for (std::size_t m = 0; m < D; ++m) {
          out_re[m * R + r] = bre[r * D + m];
          out_im[m * R + r] = bim[r * D + m];
        }
      }
      doppler_fft.forward(out_re, out_im, R);
    }
  }

  // Stage 2: matched steering onto grid angles. The 2D steering phase
  // pi (a cos(el) sin(az) + e sin(el)) factors into an elevation pass
  // followed by an elevation-dependent azimuth pass.
  std::vector<float> we_re(E * E), we_im(E * E);
  for (std::size_t l = 0; l < E; ++l) {
    const double s = std::sin(grid.elevation.center(l));
    for (std::size_t e = 0; e < E; ++e) {
      const cf w = phasor(-pi * static_cast<double>(e) * s);
      we_re[l * E + e] = w.real();
      we_im[l * E + e] = w.imag();
    }
  }
  std::vector<float> wa_re(E * A * A), wa_im(E * A * A);
  for (std::size_t l = 0; l < E; ++l) {
    const double c = std::cos(grid.elevation.center(l));
    for (std::size_t k = 0; k < A; ++k) {
      const double s = c * std::sin(grid.azimuth.center(k));
      for (std::size_t a = 0; a < A; ++a) {
        const cf w = phasor(-pi * static_cast<double>(a) * s);
        wa_re[(l * A + k) * A + a] = w.real();
        wa_im[(l * A + k) * A + a] = w.imag();
      }
    }
  }

  DenseTensorF out({D, R, A, E});
  float* power = out.mutable_values().data();
  const auto norm = static_cast<float>(1.0 / (static_cast<double>(S) * static_cast<double>(D) *
                                              static_cast<double>(elements)));
  const std::size_t chunks = (DR + kChunk - 1) / kChunk;

#pragma omp parallel
  {
    std::vector<float> xr(elements * kChunk), xi(elements * kChunk);
    std::vector<float> yr(elements * kChunk), yi(elements * kChunk);
    std::vector<float> pw(kChunk * elements);
#pragma omp for schedule(static)
    for (std::ptrdiff_t c_signed = 0; c_signed < static_cast<std::ptrdiff_t>(chunks); ++c_signed) {
      const std::size_t j0 = static_cast<std::size_t>(c_signed) * kChunk;
      const std::size_t len = std::min(kChunk, DR - j0);
      for (std::size_t ae = 0; ae < elements; ++ae) {
        std::copy_n(plane_re.data() + ae * DR + j0, len, xr.data() + ae * kChunk);
        std::copy_n(plane_im.data() + ae * DR + j0, len, xi.data() + ae * kChunk);
      }
      // Elevation pass: y[a][l] = sum_e We[l][e] x[a][e].
      for (std::size_t a = 0; a < A; ++a) {
        for (std::size_t l = 0; l < E; ++l) {
          const float* wr_row = we_re.data() + l * E;
          const float* wi_row = we_im.data() + l * E;
          for (std::size_t jb = 0; jb < kChunk; jb += kLanes) {
            float accr[kLanes] = {}, acci[kLanes] = {};
            for (std::size_t e = 0; e < E; ++e) {
              const float wr = wr_row[e], wi = wi_row[e];
              const float* __restrict br = xr.data() + (a * E + e) * kChunk + jb;
              const float* __restrict bi = xi.data() + (a * E + e) * kChunk + jb;
#pragma omp simd
              for (std::size_t j = 0; j < kLanes; ++j) {
                accr[j] += wr * br[j] - wi * bi[j];
                acci[j] += wr * bi[j] + wi * br[j];
              }
            }
            std::copy_n(accr, kLanes, yr.data() + (l * A + a) * kChunk + jb);
            std::copy_n(acci, kLanes, yi.data() + (l * A + a) * kChunk + jb);
          }
        }
      }
      // Azimuth pass: z[k][l] = sum_a Wa[l][k][a] y[a][l].
      for (std::size_t l = 0; l < E; ++l) {
        for (std::size_t k = 0; k < A; ++k) {
          const float* wr_row = wa_re.data() + (l * A + k) * A;
          const float* wi_row = wa_im.data() + (l * A + k) * A;
          for (std::size_t jb = 0; jb < kChunk; jb += kLanes) {
            float accr[kLanes] = {}, acci[kLanes] = {};
            for (std::size_t a = 0; a < A; ++a) {
              const float wr = wr_row[a], wi = wi_row[a];
              const float* __restrict br = yr.data() + (l * A + a) * kChunk + jb;
              const float* __restrict bi = yi.data() + (l * A + a) * kChunk + jb;
#pragma omp simd
              for (std::size_t j = 0; j < kLanes; ++j) {
                accr[j] += wr * br[j] - wi * bi[j];
                acci[j] += wr * bi[j] + wi * br[j];
              }
            }
            for (std::size_t j = 0; j < kLanes; ++j) {
              pw[(jb + j) * elements + k * E + l] = (accr[j] * accr[j] + acci[j] * acci[j]) * norm;
            }
          }
        }
      }
      std::copy_n(pw.data(), len * elements, power + j0 * elements);
    }
  }
  return out;
}

std::vector<BinIndex4> expected_bins(const SceneSpec& scene, const ChirpConfig& cfg,
                                     const VirtualArray& array, const PolarGrid4D& grid) {
  scene.validate();
  cfg.validate();
  array.validate();
  grid.validate();
  check_grid(cfg, array, grid);
  std::vector<BinIndex4> bins;
  bins.reserve(scene.targets.size());
  for (std::size_t i = 0; i < scene.targets.size(); ++i) {
    const PointTarget& t = scene.targets[i];
    const PolarPoint p = cart_to_polar(t.position);
    beat_frequency(p.range, cfg);
    doppler_frequency(t.radial_velocity, cfg);
    if (!covers(grid, p)) {
      fail(ErrorKind::kOutOfRange, "target " + std::to_string(i) + " lies outside the grid");
    }
    bins.push_back({grid.doppler.nearest_bin(t.radial_velocity), grid.range.nearest_bin(p.range),
                    grid.azimuth.nearest_bin(p.azimuth),
                    grid.elevation.nearest_bin(p.elevation)});
  }
  return bins;
}

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed,
                    const char* where) {
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, v] : obj.items()) {
    if (!ok.count(k)) {
      fail(ErrorKind::kInvalidArgument, std::string("unknown key '") + k + "' in " + where);
    }
  }
}

template <typename T>
void read_opt(const json& obj, const char* key, T& out) {
  if (obj.contains(key)) out = obj.at(key).get<T>();
}

}  // namespace

SceneDocument parse_scene(const std::string& json_text) {
  SceneDocument doc;
  doc.chirp = ChirpConfig::desk_default();
  double az_fov_deg = 106.0;
  double el_fov_deg = 36.0;
  try {
    const json root = json::parse(json_text);
    if (!root.is_object()) fail(ErrorKind::kInvalidArgument, "scene document must be an object");
    reject_unknown(root, {"targets", "noise_floor", "seed", "radar"}, "scene");
    read_opt(root, "noise_floor", doc.scene.noise_floor);
    read_opt(root, "seed", doc.scene.seed);
    if (root.contains("targets")) {
      for (const json& t : root.at("targets")) {
        reject_unknown(t, {"position", "radial_velocity", "amplitude"}, "target");
        PointTarget pt;
        const auto pos = t.at("position").get<std::vector<double>>();
        if (pos.size() != 3) fail(ErrorKind::kInvalidArgument, "target position needs 3 values");
        pt.position = {pos[0], pos[1], pos[2]};
        read_opt(t, "radial_velocity", pt.radial_velocity);
        read_opt(t, "amplitude", pt.amplitude);
        doc.scene.targets.push_back(pt);
      }
    }
    if (root.contains("radar")) {
      const json& r = root.at("radar");
      reject_unknown(r,
                     {"carrier_wavelength", "slope", "sample_rate", "samples_per_chirp",
                      "chirps_per_frame", "chirp_interval", "azimuth_elements",
                      "elevation_elements", "azimuth_fov_deg", "elevation_fov_deg"},
                     "radar");
      read_opt(r, "carrier_wavelength", doc.chirp.carrier_wavelength);
      read_opt(r, "slope", doc.chirp.slope);
      read_opt(r, "sample_rate", doc.chirp.sample_rate);
      read_opt(r, "samples_per_chirp", doc.chirp.samples_per_chirp);
      read_opt(r, "chirps_per_frame", doc.chirp.chirps_per_frame);
      read_opt(r, "chirp_interval", doc.chirp.chirp_interval);
      read_opt(r, "azimuth_elements", doc.array.azimuth_elements);
      read_opt(r, "elevation_elements", doc.array.elevation_elements);
      read_opt(r, "azimuth_fov_deg", az_fov_deg);
      read_opt(r, "elevation_fov_deg", el_fov_deg);
    }
  } catch (const json::exception& e) {
    fail(ErrorKind::kInvalidArgument, std::string("scene document: ") + e.what());
  }
  doc.scene.validate();
  doc.grid = make_polar_grid(doc.chirp, doc.array, az_fov_deg * pi / 180.0,
                             el_fov_deg * pi / 180.0);
  return doc;
}

SceneDocument load_scene_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::kIo, "cannot open scene file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scene(ss.str());
}

}  // namespace srt4d
