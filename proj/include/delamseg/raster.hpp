#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "delamseg/error.hpp"

namespace delamseg {

/// Row-major 2-D grid. Pixel (x, y) lives at index y * width + x.
template <typename T>
class Grid {
 public:
  Grid() = default;

  Grid(int width, int height, T fill = T{})
      : width_(width), height_(height) {
    check_shape(width, height);
    data_.assign(static_cast<std::size_t>(width) * height, fill);
  }

  Grid(int width, int height, std::vector<T> values)
      : width_(width), height_(height), data_(std::move(values)) {
    check_shape(width, height);
    if (data_.size() != static_cast<std::size_t>(width) * height) {
      throw ParameterError("grid values length does not match width x height");
    }
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * width_ + x;
  }
  bool in_bounds(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  T& operator()(int x, int y) noexcept { return data_[index(x, y)]; }
  const T& operator()(int x, int y) const noexcept { return data_[index(x, y)]; }
  T& operator[](std::size_t i) noexcept { return data_[i]; }
  const T& operator[](std::size_t i) const noexcept { return data_[i]; }

  std::span<T> values() noexcept { return data_; }
  std::span<const T> values() const noexcept { return data_; }

  template <typename U>
  bool same_shape(const Grid<U>& other) const noexcept {
    return width_ == other.width() && height_ == other.height();
  }

  bool operator==(const Grid&) const = default;

 private:
  static void check_shape(int width, int height) {
    if (width < 1 || height < 1) {
      throw ParameterError("raster dimensions must be at least 1x1");
    }
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

/// Single-band temperature raster in degrees Celsius.
///
/// Pixels flagged in the optional nodata mask are excluded from statistics
/// and never labeled. Their stored value is meaningless and normalized to 0.
class ThermalRaster : public Grid<double> {
 public:
  ThermalRaster() = default;
  ThermalRaster(int width, int height, double fill = 0.0);
  ThermalRaster(int width, int height, std::vector<double> values,
                std::vector<std::uint8_t> nodata = {});

  bool has_nodata() const noexcept { return !nodata_.empty(); }
  bool is_valid(std::size_t i) const noexcept {
    return nodata_.empty() || nodata_[i] == 0;
  }
  /// Empty when every pixel is valid.
  const std::vector<std::uint8_t>& nodata_mask() const noexcept { return nodata_; }

  std::size_t valid_count() const noexcept;

  bool operator==(const ThermalRaster&) const = default;

 private:
  std::vector<std::uint8_t> nodata_;
};

/// Non-negative gradient magnitudes, degrees Celsius per pixel.
class GradientRaster : public Grid<double> {
 public:
  GradientRaster() = default;
  GradientRaster(int width, int height, std::vector<double> values);

  bool operator==(const GradientRaster&) const = default;
};

class BinaryMask : public Grid<std::uint8_t> {
 public:
  BinaryMask() = default;
  BinaryMask(int width, int height, bool fill = false)
      : Grid<std::uint8_t>(width, height, static_cast<std::uint8_t>(fill ? 1 : 0)) {}
  BinaryMask(int width, int height, std::vector<std::uint8_t> values);

  bool test(std::size_t i) const noexcept { return (*this)[i] != 0; }
  void set(std::size_t i, bool on = true) noexcept { (*this)[i] = on ? 1 : 0; }

  std::size_t count() const noexcept;

  bool operator==(const BinaryMask&) const = default;
};

struct ValueRange {
  double min = 0.0;
  double max = 0.0;
  double span() const noexcept { return max - min; }
};

/// Min/max over valid pixels. Throws PreconditionError when none are valid.
ValueRange valid_range(const ThermalRaster& raster);

/// Copy with nodata pixels replaced by `value` and the nodata mask dropped.
ThermalRaster fill_nodata(const ThermalRaster& raster, double value);

BinaryMask mask_and(const BinaryMask& a, const BinaryMask& b);
BinaryMask mask_or(const BinaryMask& a, const BinaryMask& b);
BinaryMask mask_and_not(const BinaryMask& a, const BinaryMask& b);
/// True when every pixel set in `inner` is set in `outer`.
bool mask_subset(const BinaryMask& inner, const BinaryMask& outer);

}  // namespace delamseg
