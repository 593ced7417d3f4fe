#pragma once

#include <optional>

#include "delamseg/raster.hpp"

namespace delamseg {

/// Nonlinear diffusion settings.
///
/// The diffusivity is g(s) = 1 / (1 + (s / kappa)^2) evaluated on the gradient
/// magnitude of the Gaussian-presmoothed image (scale `sigma`), stepped with an
/// explicit 4-neighbor scheme and zero-flux borders. When `kappa` is unset it
/// is taken as the 90th percentile of the initial gradient magnitudes.
struct DiffusionParams {
  double sigma = 3.4;
  std::optional<double> kappa;
  double tau = 0.2;
  int iterations = 10;

  void validate() const;
};

/// Separable Gaussian convolution with replicate padding, kernel radius
/// ceil(3 sigma). Nodata pixels are skipped and the kernel renormalized.
/// sigma == 0 returns the input.
ThermalRaster gaussian_blur(const ThermalRaster& raster, double sigma);

/// |grad(G_sigma * raster)| via central differences, replicate padding.
/// Nodata pixels get zero magnitude.
GradientRaster gradient_magnitude(const ThermalRaster& raster, double sigma);

ThermalRaster diffuse(const ThermalRaster& raster, const DiffusionParams& params);

/// The kappa actually used by diffuse() for this raster.
double resolve_kappa(const ThermalRaster& raster, const DiffusionParams& params);

}  // namespace delamseg
