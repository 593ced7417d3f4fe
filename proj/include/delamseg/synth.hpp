#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "delamseg/raster.hpp"

namespace delamseg {

struct Background {
  enum class Kind { Constant, Ramp, Smooth };
  Kind kind = Kind::Constant;
  double base = 25.0;
  /// Ramp slope, deg C per pixel along x and y.
  double gx = 0.0;
  double gy = 0.0;
  /// Smooth field: amplitude * sin(2 pi x / wavelength) * cos(2 pi y / wavelength).
  double amplitude = 0.0;
  double wavelength = 64.0;

  double value(double x, double y) const noexcept;
};

struct Blob {
  enum class Profile { Gaussian, Plateau };
  double cx = 0.0;
  double cy = 0.0;
  /// Gaussian: standard deviation. Plateau: radius of the half-height contour.
  double radius = 1.0;
  double peak_contrast = 1.0;
  Profile profile = Profile::Gaussian;
  /// Plateau edge softness in pixels (logistic scale).
  double edge = 1.0;

  /// Noiseless contribution at pixel center (x, y); equals peak_contrast at
  /// the center.
  double value(double x, double y) const noexcept;
};

struct SceneSpec {
  int width = 64;
  int height = 64;
  Background background;
  std::vector<Blob> blobs;
  double noise_std = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct GroundTruth {
  /// Union of blob footprints.
  BinaryMask defects;
  /// Per blob: pixels whose noiseless blob contribution reaches half the peak
  /// contrast in magnitude.
  std::vector<BinaryMask> footprints;
  /// Per blob: inner boundary pixels of the footprint (8-connectivity).
  std::vector<std::vector<std::size_t>> boundaries;
};

struct Scene {
  ThermalRaster raster;
  GroundTruth truth;
};

/// background + blobs + i.i.d. N(0, noise_std^2) noise. The noise stream is
/// std::mt19937_64 seeded with `seed`, mapped to 53-bit uniforms and then to
/// normals by Box-Muller, consumed in raster order.
Scene gen_scene(const SceneSpec& spec);

/// Noiseless raster only.
ThermalRaster render_noiseless(const SceneSpec& spec);

struct Signal1D {
  std::vector<double> x;
  std::vector<double> f;
  std::vector<double> g;
};

/// f(x) = sin x + 2 cos(2x + 5) + 3 sin 3x, g = f - 3, on n uniform samples.
Signal1D signal_fig1(double x_min, double x_max, int n_samples);

/// Key=value scene description. Keys: width, height, noise_std, seed,
/// background (constant|ramp|smooth), background.base, background.gx,
/// background.gy, background.amplitude, background.wavelength, and per blob
/// i = 0, 1, ...: blob.i.cx, blob.i.cy, blob.i.radius, blob.i.contrast,
/// blob.i.profile (gaussian|plateau), blob.i.edge.
SceneSpec parse_scene_spec(std::string_view text);
std::string format_scene_spec(const SceneSpec& spec);
SceneSpec load_scene_spec(const std::filesystem::path& path);

}  // namespace delamseg
