#include "delamseg/raster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace delamseg {

ThermalRaster::ThermalRaster(int width, int height, double fill)
    : Grid<double>(width, height, fill) {
  if (!std::isfinite(fill)) throw ParameterError("raster fill value must be finite");
}

ThermalRaster::ThermalRaster(int width, int height, std::vector<double> values,
                             std::vector<std::uint8_t> nodata)
    : Grid<double>(width, height, std::move(values)), nodata_(std::move(nodata)) {
  if (!nodata_.empty() && nodata_.size() != size()) {
    throw ParameterError("nodata mask length does not match raster size");
  }
  bool any_nodata = false;
  for (std::size_t i = 0; i < size(); ++i) {
    if (!nodata_.empty() && nodata_[i] != 0) {
      nodata_[i] = 1;
      (*this)[i] = 0.0;
      any_nodata = true;
    } else if (!std::isfinite((*this)[i])) {
      throw ParameterError("raster value at index " + std::to_string(i) +
                           " is not finite");
    }
  }
  if (!any_nodata) nodata_.clear();
}

std::size_t ThermalRaster::valid_count() const noexcept {
  if (nodata_.empty()) return size();
  return static_cast<std::size_t>(std::count(nodata_.begin(), nodata_.end(), 0));
}

GradientRaster::GradientRaster(int width, int height, std::vector<double> values)
    : Grid<double>(width, height, std::move(values)) {
  for (double v : this->values()) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw ParameterError("gradient magnitudes must be finite and non-negative");
    }
  }
}

BinaryMask::BinaryMask(int width, int height, std::vector<std::uint8_t> values)
    : Grid<std::uint8_t>(width, height, std::move(values)) {
  for (auto& v : this->values()) v = v != 0 ? 1 : 0;
}

std::size_t BinaryMask::count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(values().begin(), values().end(), [](auto v) { return v != 0; }));
}

ValueRange valid_range(const ThermalRaster& raster) {
  ValueRange r{std::numeric_limits<double>::infinity(),
               -std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i < raster.size(); ++i) {
    if (!raster.is_valid(i)) continue;
    r.min = std::min(r.min, raster[i]);
    r.max = std::max(r.max, raster[i]);
  }
  if (r.min > r.max) throw PreconditionError("raster has no valid pixels");
  return r;
}

ThermalRaster fill_nodata(const ThermalRaster& raster, double value) {
  std::vector<double> out(raster.values().begin(), raster.values().end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!raster.is_valid(i)) out[i] = value;
  }
  return ThermalRaster(raster.width(), raster.height(), std::move(out));
}

namespace {

template <typename Op>
BinaryMask combine(const BinaryMask& a, const BinaryMask& b, Op op) {
  if (!a.same_shape(b)) throw PreconditionError("mask shapes differ");
  BinaryMask out(a.width(), a.height());
  for (std::size_t i = 0; i < a.size(); ++i) out.set(i, op(a.test(i), b.test(i)));
  return out;
}

}  // namespace

BinaryMask mask_and(const BinaryMask& a, const BinaryMask& b) {
  return combine(a, b, [](bool x, bool y) { return x && y; });
}

BinaryMask mask_or(const BinaryMask& a, const BinaryMask& b) {
  return combine(a, b, [](bool x, bool y) { return x || y; });
}

BinaryMask mask_and_not(const BinaryMask& a, const BinaryMask& b) {
  return combine(a, b, [](bool x, bool y) { return x && !y; });
}

bool mask_subset(const BinaryMask& inner, const BinaryMask& outer) {
  if (!inner.same_shape(outer)) throw PreconditionError("mask shapes differ");
  for (std::size_t i = 0; i < inner.size(); ++i) {
    if (inner.test(i) && !outer.test(i)) return false;
  }
  return true;
}

}  // namespace delamseg
