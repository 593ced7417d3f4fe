#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "delamseg/eval.hpp"
#include "delamseg/raster.hpp"
#include "delamseg/synth.hpp"

namespace fixtures {

using namespace delamseg;

inline Blob plateau(double cx, double cy, double r, double c, double edge) {
  Blob b;
  b.cx = cx;
  b.cy = cy;
  b.radius = r;
  b.peak_contrast = c;
  b.profile = Blob::Profile::Plateau;
  b.edge = edge;
  return b;
}

inline Background ramp(double base, double gx) {
  Background bg;
  bg.kind = Background::Kind::Ramp;
  bg.base = base;
  bg.gx = gx;
  return bg;
}

/// 256x256, 3.3 C ramp, blobs of 1.5 and 3.0 C.
inline SceneSpec step_size_scene() {
  SceneSpec s;
  s.width = 256;
  s.height = 256;
  s.background = ramp(20.0, 3.3 / 255.0);
  s.blobs = {plateau(64, 128, 14, 1.5, 1.5), plateau(192, 128, 14, 3.0, 1.5)};
  s.noise_std = 0.05;
  s.seed = 20181022;
  return s;
}

/// 256x128, 4 C ramp; the warm end (24 C) is hotter than the cool blob's
/// peak (22.8 C) while both blobs have 1.8 C local contrast.
inline SceneSpec nonuniform_scene(std::uint64_t seed = 7) {
  SceneSpec s;
  s.width = 256;
  s.height = 128;
  s.background = ramp(20.0, 4.0 / 255.0);
  s.blobs = {plateau(64, 64, 16, 1.8, 1.0), plateau(192, 64, 16, 1.8, 1.0)};
  s.noise_std = 0.05;
  s.seed = seed;
  return s;
}

/// Two sharp-edged blobs for boundary-support checks.
inline SceneSpec boundary_scene() {
  SceneSpec s;
  s.width = 192;
  s.height = 192;
  s.background = ramp(20.0, 2.0 / 191.0);
  s.blobs = {plateau(56, 96, 24, 1.5, 0.5), plateau(136, 96, 24, 1.5, 0.5)};
  s.noise_std = 0.05;
  s.seed = 11;
  return s;
}

/// Square window of half-size 2.5 R around a blob.
inline BinaryMask blob_window(const SceneSpec& s, const Blob& b) {
  BinaryMask win(s.width, s.height);
  const double half = 2.5 * b.radius;
  for (int y = 0; y < s.height; ++y) {
    for (int x = 0; x < s.width; ++x) {
      if (std::abs(x - b.cx) <= half && std::abs(y - b.cy) <= half) win.set(win.index(x, y));
    }
  }
  return win;
}

/// IoU of the prediction inside the blob's window against its footprint.
inline double local_iou(const BinaryMask& pred, const SceneSpec& s, const Scene& scene,
                        std::size_t blob) {
  return iou(mask_and(pred, blob_window(s, s.blobs[blob])), scene.truth.footprints[blob]);
}

inline ThermalRaster random_raster(std::mt19937_64& rng, int w, int h, int levels) {
  std::uniform_int_distribution<int> d(0, levels - 1);
  std::vector<double> v(static_cast<std::size_t>(w) * h);
  for (double& x : v) x = d(rng);
  return ThermalRaster(w, h, std::move(v));
}

inline ThermalRaster random_real_raster(std::mt19937_64& rng, int w, int h) {
  std::uniform_real_distribution<double> d(0.0, 10.0);
  std::vector<double> v(static_cast<std::size_t>(w) * h);
  for (double& x : v) x = d(rng);
  return ThermalRaster(w, h, std::move(v));
}

inline BinaryMask random_mask(std::mt19937_64& rng, int w, int h, double p) {
  std::bernoulli_distribution d(p);
  BinaryMask m(w, h);
  for (std::size_t i = 0; i < m.size(); ++i) m.set(i, d(rng));
  return m;
}

inline ThermalRaster row(std::vector<double> v) {
  const int n = static_cast<int>(v.size());
  return ThermalRaster(n, 1, std::move(v));
}

}  // namespace fixtures
