#pragma once

#include <span>
#include <vector>

#include "delamseg/components.hpp"
#include "delamseg/raster.hpp"

namespace delamseg {

/// Flat structuring element: a set of offsets containing the origin and
/// closed under point reflection.
class StructuringElement {
 public:
  explicit StructuringElement(std::vector<Offset> offsets);

  /// (2r+1) x (2r+1) square; radius 1 is the 8-neighborhood.
  static StructuringElement square(int radius = 1);
  /// Origin plus the 4-neighborhood.
  static StructuringElement cross();
  static StructuringElement origin();
  static StructuringElement for_connectivity(Connectivity connectivity);

  std::span<const Offset> offsets() const noexcept { return offsets_; }

  bool operator==(const StructuringElement&) const = default;

 private:
  std::vector<Offset> offsets_;
};

struct MorphSettings {
  StructuringElement se = StructuringElement::square();
  /// Tolerance (deg C) for plateau equality and dome positivity.
  double plateau_eps = 1e-6;

  void validate() const;
};

/// Flat dilation; out-of-bounds neighbors are ignored.
ThermalRaster dilate(const ThermalRaster& raster, const StructuringElement& se);

/// Grayscale reconstruction by dilation of `marker` under `mask`.
///
/// Hybrid raster-scan + FIFO propagation. The marker may exceed the mask by
/// at most `plateau_eps` (it is clipped); larger excursions throw
/// PreconditionError.
ThermalRaster reconstruct(const ThermalRaster& marker, const ThermalRaster& mask,
                          const StructuringElement& se, double plateau_eps = 1e-6);

/// Reference implementation: iterate min(dilate(x), mask) until nothing changes.
ThermalRaster reconstruct_naive(const ThermalRaster& marker, const ThermalRaster& mask,
                                const StructuringElement& se, double plateau_eps = 1e-6);

struct Dome {
  ThermalRaster dome;
  RegionSet support;
};

/// F - reconstruct(marker, F) and the components of {dome > plateau_eps}.
Dome dome_from_marker(const ThermalRaster& image, const ThermalRaster& marker,
                      const MorphSettings& settings, Connectivity connectivity);

/// h-dome transform: marker = F - h. Requires h > plateau_eps.
Dome h_dome(const ThermalRaster& image, double h, const MorphSettings& settings,
            Connectivity connectivity = Connectivity::Eight);

/// F - w^3 * h, with w the min-max normalized `image` (valid pixels only).
/// A flat image yields w = 0 everywhere, i.e. the marker equals F.
ThermalRaster regularized_marker(const ThermalRaster& image, double h);

/// Same, but the weights w come from `weight_source` (same shape as image).
ThermalRaster regularized_marker(const ThermalRaster& image, double h,
                                 const ThermalRaster& weight_source);

/// Plateaus (neighbors chained within plateau_eps) whose every outward
/// neighbor is lower by more than plateau_eps.
RegionSet regional_maxima(const ThermalRaster& raster, const MorphSettings& settings,
                          Connectivity connectivity = Connectivity::Eight);

}  // namespace delamseg
