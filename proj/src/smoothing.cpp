#include "delamseg/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "delamseg/stats.hpp"

namespace delamseg {

void DiffusionParams::validate() const {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw ParameterError("diffusion sigma must be >= 0");
  }
  if (kappa && !(*kappa > 0.0)) throw ParameterError("diffusion kappa must be > 0");
  if (!(tau > 0.0 && tau <= 0.25)) {
    throw ParameterError("diffusion tau must lie in (0, 0.25]");
  }
  if (iterations < 0) throw ParameterError("diffusion iterations must be >= 0");
}

namespace {

std::vector<double> gaussian_kernel(double sigma) {
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    k[i + radius] = std::exp(-0.5 * (i * i) / (sigma * sigma));
    sum += k[i + radius];
  }
  for (auto& v : k) v /= sum;
  return k;
}

// One separable pass. `horizontal` selects the axis.
std::vector<double> convolve_axis(const ThermalRaster& src, std::span<const double> values,
                                  const std::vector<double>& kernel, bool horizontal) {
  const int w = src.width();
  const int h = src.height();
  const int radius = static_cast<int>(kernel.size() / 2);
  std::vector<double> out(values.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const auto i = src.index(x, y);
      if (!src.is_valid(i)) {
        out[i] = values[i];
        continue;
      }
      double acc = 0.0;
      double weight = 0.0;
      for (int t = -radius; t <= radius; ++t) {
        const int sx = horizontal ? std::clamp(x + t, 0, w - 1) : x;
        const int sy = horizontal ? y : std::clamp(y + t, 0, h - 1);
        const auto j = src.index(sx, sy);
        if (!src.is_valid(j)) continue;
        acc += kernel[t + radius] * values[j];
        weight += kernel[t + radius];
      }
      out[i] = acc / weight;
    }
  }
  return out;
}

}  // namespace

ThermalRaster gaussian_blur(const ThermalRaster& raster, double sigma) {
  if (!(sigma >= 0.0)) throw ParameterError("gaussian sigma must be >= 0");
  if (sigma == 0.0) return raster;
  const auto kernel = gaussian_kernel(sigma);
  auto rows = convolve_axis(raster, raster.values(), kernel, true);
  auto both = convolve_axis(raster, rows, kernel, false);
  return ThermalRaster(raster.width(), raster.height(), std::move(both), raster.nodata_mask());
}

GradientRaster gradient_magnitude(const ThermalRaster& raster, double sigma) {
  const auto smooth = gaussian_blur(raster, sigma);
  const int w = smooth.width();
  const int h = smooth.height();
  std::vector<double> out(smooth.size(), 0.0);
  // Replicate padding; a nodata neighbor is replaced by the center value.
  const auto at = [&](int x, int y, std::size_t center) {
    const auto j = smooth.index(std::clamp(x, 0, w - 1), std::clamp(y, 0, h - 1));
    return smooth.is_valid(j) ? smooth[j] : smooth[center];
  };
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const auto i = smooth.index(x, y);
      if (!smooth.is_valid(i)) continue;
      const double gx = 0.5 * (at(x + 1, y, i) - at(x - 1, y, i));
      const double gy = 0.5 * (at(x, y + 1, i) - at(x, y - 1, i));
      out[i] = std::sqrt(gx * gx + gy * gy);
    }
  }
  return GradientRaster(w, h, std::move(out));
}

double resolve_kappa(const ThermalRaster& raster, const DiffusionParams& params) {
  params.validate();
  if (params.kappa) return *params.kappa;
  const auto grad = gradient_magnitude(raster, params.sigma);
  std::vector<double> valid;
  valid.reserve(grad.size());
  double max_grad = 0.0;
  for (std::size_t i = 0; i < grad.size(); ++i) {
    if (!raster.is_valid(i)) continue;
    valid.push_back(grad[i]);
    max_grad = std::max(max_grad, grad[i]);
  }
  if (valid.empty()) return 1.0;
  const double p90 = percentile_linear(std::move(valid), 90.0);
  if (p90 > 0.0) return p90;
  // Sparse structure: fewer than 10% of pixels carry any gradient.
  return max_grad > 0.0 ? max_grad : 1.0;
}

ThermalRaster diffuse(const ThermalRaster& raster, const DiffusionParams& params) {
  params.validate();
  if (params.iterations == 0) return raster;
  const double kappa = resolve_kappa(raster, params);
  const int w = raster.width();
  const int h = raster.height();
  ThermalRaster u = raster;
  std::vector<double> conductance(u.size());
  std::vector<double> next(u.size());
  for (int it = 0; it < params.iterations; ++it) {
    const auto grad = gradient_magnitude(u, params.sigma);
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double s = grad[i] / kappa;
      conductance[i] = 1.0 / (1.0 + s * s);
    }
    std::copy(u.values().begin(), u.values().end(), next.begin());
    // Each interior edge is visited once; the flux leaves one pixel and
    // enters the other, so the total heat is conserved.
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const auto p = u.index(x, y);
        if (!u.is_valid(p)) continue;
        if (x + 1 < w) {
          const auto q = p + 1;
          if (u.is_valid(q)) {
            const double flux =
                params.tau * 0.5 * (conductance[p] + conductance[q]) * (u[q] - u[p]);
            next[p] += flux;
            next[q] -= flux;
          }
        }
        if (y + 1 < h) {
          const auto q = p + static_cast<std::size_t>(w);
          if (u.is_valid(q)) {
            const double flux =
                params.tau * 0.5 * (conductance[p] + conductance[q]) * (u[q] - u[p]);
            next[p] += flux;
            next[q] -= flux;
          }
        }
      }
    }
    std::copy(next.begin(), next.end(), u.values().begin());
  }
  return u;
}

}  // namespace delamseg
