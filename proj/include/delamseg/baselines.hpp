#pragma once

#include <span>
#include <vector>

#include "delamseg/raster.hpp"

namespace delamseg {

struct ThresholdSpec {
  enum class Kind { Absolute, Percentile };
  Kind kind = Kind::Absolute;
  /// Degrees C for Absolute, 0..100 for Percentile.
  double value = 0.0;

  static ThresholdSpec absolute(double celsius) { return {Kind::Absolute, celsius}; }
  static ThresholdSpec percentile(double p) { return {Kind::Percentile, p}; }
};

/// The threshold in degrees C that `spec` resolves to on `raster`.
double resolve_threshold(const ThermalRaster& raster, const ThresholdSpec& spec);

/// Pixels strictly above the resolved threshold. Nodata is never set.
BinaryMask threshold_segment(const ThermalRaster& raster, const ThresholdSpec& spec);

struct KMeans1D {
  /// Cluster means in increasing order.
  std::vector<double> centers;
  /// Largest member value of each cluster; a value v belongs to the first
  /// cluster c with v <= upper[c].
  std::vector<double> upper;
  double sse = 0.0;

  std::size_t cluster_of(double v) const noexcept;
};

/// Globally optimal 1-D k-means over sorted distinct values (weighted by
/// multiplicity) via dynamic programming with divide-and-conquer row
/// minimization. Throws DegenerateInputError when fewer than k distinct
/// values exist.
KMeans1D kmeans_1d_exact(std::span<const double> values, int k);

/// k-means over valid temperatures. Daytime: everything but the coolest
/// cluster is foreground; nighttime: everything but the warmest.
BinaryMask kmeans_temperature_segment(const ThermalRaster& raster, int k = 2,
                                      bool daytime = true);

}  // namespace delamseg
