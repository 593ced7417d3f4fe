#include "delamseg/morphology.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <string>

#include "delamseg/raster_io.hpp"

namespace delamseg {

StructuringElement::StructuringElement(std::vector<Offset> offsets)
    : offsets_(std::move(offsets)) {
  const auto has = [&](Offset o) {
    return std::find(offsets_.begin(), offsets_.end(), o) != offsets_.end();
  };
  if (!has({0, 0})) throw ParameterError("structuring element must contain the origin");
  for (const auto& o : offsets_) {
    if (!has({-o.dx, -o.dy})) {
      throw ParameterError("structuring element must be symmetric under reflection");
    }
  }
}

StructuringElement StructuringElement::square(int radius) {
  if (radius < 0) throw ParameterError("square radius must be >= 0");
  std::vector<Offset> offsets;
  for (int dy = -radius; dy <= radius; ++dy) {
    for (int dx = -radius; dx <= radius; ++dx) offsets.push_back({dx, dy});
  }
  return StructuringElement(std::move(offsets));
}

StructuringElement StructuringElement::cross() {
  return StructuringElement({{0, -1}, {-1, 0}, {0, 0}, {1, 0}, {0, 1}});
}

StructuringElement StructuringElement::origin() { return StructuringElement({{0, 0}}); }

StructuringElement StructuringElement::for_connectivity(Connectivity connectivity) {
  return connectivity == Connectivity::Four ? cross() : square(1);
}

void MorphSettings::validate() const {
  if (!(plateau_eps > 0.0)) throw ParameterError("plateau_eps must be > 0");
}

ThermalRaster dilate(const ThermalRaster& raster, const StructuringElement& se) {
  const int w = raster.width();
  const int h = raster.height();
  std::vector<double> out(raster.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double m = -std::numeric_limits<double>::infinity();
      for (const auto& o : se.offsets()) {
        const int nx = x + o.dx;
        const int ny = y + o.dy;
        if (raster.in_bounds(nx, ny)) m = std::max(m, raster(nx, ny));
      }
      out[raster.index(x, y)] = m;
    }
  }
  return ThermalRaster(w, h, std::move(out));
}

namespace {

ThermalRaster clipped_marker(const ThermalRaster& marker, const ThermalRaster& mask,
                             double plateau_eps) {
  if (!marker.same_shape(mask)) {
    throw PreconditionError("marker and mask shapes differ");
  }
  std::vector<double> j(marker.size());
  for (std::size_t i = 0; i < marker.size(); ++i) {
    if (marker[i] > mask[i] + plateau_eps) {
      throw PreconditionError("marker exceeds mask by " + format_double(marker[i] - mask[i]) +
                              " at index " + std::to_string(i));
    }
    j[i] = std::min(marker[i], mask[i]);
  }
  return ThermalRaster(marker.width(), marker.height(), std::move(j));
}

}  // namespace

ThermalRaster reconstruct_naive(const ThermalRaster& marker, const ThermalRaster& mask,
                                const StructuringElement& se, double plateau_eps) {
  ThermalRaster current = clipped_marker(marker, mask, plateau_eps);
  while (true) {
    ThermalRaster next = dilate(current, se);
    for (std::size_t i = 0; i < next.size(); ++i) next[i] = std::min(next[i], mask[i]);
    if (next == current) return current;
    current = std::move(next);
  }
}

ThermalRaster reconstruct(const ThermalRaster& marker, const ThermalRaster& mask,
                          const StructuringElement& se, double plateau_eps) {
  ThermalRaster j = clipped_marker(marker, mask, plateau_eps);
  const int w = j.width();
  const int h = j.height();

  // Split the neighborhood into the halves already visited by a forward scan
  // (N+) and by a backward scan (N-).
  std::vector<Offset> forward;
  std::vector<Offset> backward;
  std::vector<Offset> all;
  for (const auto& o : se.offsets()) {
    if (o.dx == 0 && o.dy == 0) continue;
    all.push_back(o);
    if (o.dy < 0 || (o.dy == 0 && o.dx < 0)) {
      forward.push_back(o);
    } else {
      backward.push_back(o);
    }
  }

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double m = j(x, y);
      for (const auto& o : forward) {
        if (j.in_bounds(x + o.dx, y + o.dy)) m = std::max(m, j(x + o.dx, y + o.dy));
      }
      j(x, y) = std::min(m, mask(x, y));
    }
  }

  std::deque<std::size_t> fifo;
  for (int y = h - 1; y >= 0; --y) {
    for (int x = w - 1; x >= 0; --x) {
      double m = j(x, y);
      for (const auto& o : backward) {
        if (j.in_bounds(x + o.dx, y + o.dy)) m = std::max(m, j(x + o.dx, y + o.dy));
      }
      const double v = std::min(m, mask(x, y));
      j(x, y) = v;
      for (const auto& o : backward) {
        const int nx = x + o.dx;
        const int ny = y + o.dy;
        if (!j.in_bounds(nx, ny)) continue;
        if (j(nx, ny) < v && j(nx, ny) < mask(nx, ny)) {
          fifo.push_back(j.index(x, y));
          break;
        }
      }
    }
  }

  while (!fifo.empty()) {
    const std::size_t p = fifo.front();
    fifo.pop_front();
    const int x = static_cast<int>(p % w);
    const int y = static_cast<int>(p / w);
    for (const auto& o : all) {
      const int nx = x + o.dx;
      const int ny = y + o.dy;
      if (!j.in_bounds(nx, ny)) continue;
      const auto q = j.index(nx, ny);
      if (j[q] < j[p] && mask[q] != j[q]) {
        j[q] = std::min(j[p], mask[q]);
        fifo.push_back(q);
      }
    }
  }
  return j;
}

Dome dome_from_marker(const ThermalRaster& image, const ThermalRaster& marker,
                      const MorphSettings& settings, Connectivity connectivity) {
  settings.validate();
  const auto rec = reconstruct(marker, image, settings.se, settings.plateau_eps);
  std::vector<double> dome(image.size());
  BinaryMask positive(image.width(), image.height());
  for (std::size_t i = 0; i < image.size(); ++i) {
    dome[i] = image.is_valid(i) ? image[i] - rec[i] : 0.0;
    positive.set(i, dome[i] > settings.plateau_eps);
  }
  return Dome{ThermalRaster(image.width(), image.height(), std::move(dome)),
              connected_components(positive, connectivity)};
}

Dome h_dome(const ThermalRaster& image, double h, const MorphSettings& settings,
            Connectivity connectivity) {
  settings.validate();
  if (!(h > settings.plateau_eps)) {
    throw ParameterError("h-dome offset must exceed plateau_eps, got " + format_double(h));
  }
  std::vector<double> marker(image.values().begin(), image.values().end());
  for (auto& v : marker) v -= h;
  return dome_from_marker(image, ThermalRaster(image.width(), image.height(), std::move(marker)),
                          settings, connectivity);
}

ThermalRaster regularized_marker(const ThermalRaster& image, double h) {
  return regularized_marker(image, h, image);
}

ThermalRaster regularized_marker(const ThermalRaster& image, double h,
                                 const ThermalRaster& weight_source) {
  if (!(h > 0.0)) throw ParameterError("regularized offset h must be > 0");
  if (!image.same_shape(weight_source)) {
    throw PreconditionError("weight source shape differs from image");
  }
  const auto range = valid_range(weight_source);
  const double span = range.span();
  std::vector<double> marker(image.values().begin(), image.values().end());
  if (span <= 0.0) return ThermalRaster(image.width(), image.height(), std::move(marker));
  for (std::size_t i = 0; i < marker.size(); ++i) {
    if (!image.is_valid(i) || !weight_source.is_valid(i)) continue;
    const double w = std::clamp((weight_source[i] - range.min) / span, 0.0, 1.0);
    marker[i] -= w * w * w * h;
  }
  return ThermalRaster(image.width(), image.height(), std::move(marker));
}

RegionSet regional_maxima(const ThermalRaster& raster, const MorphSettings& settings,
                          Connectivity connectivity) {
  settings.validate();
  const int w = raster.width();
  const int h = raster.height();
  const auto offsets = neighbor_offsets(connectivity);
  const double eps = settings.plateau_eps;

  std::vector<int> plateau(raster.size(), 0);
  std::vector<std::size_t> stack;
  int plateaus = 0;
  for (std::size_t seed = 0; seed < raster.size(); ++seed) {
    if (!raster.is_valid(seed) || plateau[seed] != 0) continue;
    plateau[seed] = ++plateaus;
    stack.push_back(seed);
    while (!stack.empty()) {
      const auto p = stack.back();
      stack.pop_back();
      const int x = static_cast<int>(p % w);
      const int y = static_cast<int>(p / w);
      for (const auto& o : offsets) {
        if (!raster.in_bounds(x + o.dx, y + o.dy)) continue;
        const auto q = raster.index(x + o.dx, y + o.dy);
        if (!raster.is_valid(q) || plateau[q] != 0) continue;
        if (std::abs(raster[q] - raster[p]) <= eps) {
          plateau[q] = plateaus;
          stack.push_back(q);
        }
      }
    }
  }

  std::vector<std::uint8_t> is_max(static_cast<std::size_t>(plateaus) + 1, 1);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const auto p = raster.index(x, y);
      if (plateau[p] == 0) continue;
      for (const auto& o : offsets) {
        if (!raster.in_bounds(x + o.dx, y + o.dy)) continue;
        const auto q = raster.index(x + o.dx, y + o.dy);
        if (plateau[q] == 0 || plateau[q] == plateau[p]) continue;
        if (raster[q] > raster[p]) is_max[plateau[p]] = 0;
      }
    }
  }

  std::vector<int> relabel(static_cast<std::size_t>(plateaus) + 1, 0);
  int count = 0;
  for (std::size_t i = 0; i < plateau.size(); ++i) {
    const int l = plateau[i];
    if (l == 0 || !is_max[l]) {
      plateau[i] = 0;
      continue;
    }
    if (relabel[l] == 0) relabel[l] = ++count;
    plateau[i] = relabel[l];
  }
  return regions_from_labels(w, h, std::move(plateau), count, connectivity);
}

}  // namespace delamseg
