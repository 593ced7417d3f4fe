#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "delamseg/raster.hpp"

namespace delamseg {

/// On-disk raster encodings.
///
/// - Csv: one row per line, ',' separated, '.' decimal. An empty cell or
///   "nan" marks a nodata pixel.
/// - F32Binary: 16-byte header ("TRF1", uint32 width, uint32 height,
///   uint32 reserved = 0), then width*height little-endian float32 values in
///   row-major order. NaN marks nodata.
/// - Pgm16: binary PGM (P5) with maxval 65535. Temperature is
///   offset + scale * sample; the scaling is read from a
///   "# scale=<s> offset=<o>" comment or supplied by the caller.
enum class RasterFormat { Csv, F32Binary, Pgm16 };

/// PGM masks are 8-bit P5 with 0/255 samples; CSV masks hold 0/1 cells.
enum class MaskFormat { Pgm, Csv };

struct Pgm16Scaling {
  double scale = 1.0;
  double offset = 0.0;
};

RasterFormat raster_format_from_string(std::string_view name);
MaskFormat mask_format_from_string(std::string_view name);
/// Guesses the raster format from the file extension (.csv, .f32/.bin, .pgm).
RasterFormat raster_format_from_path(const std::filesystem::path& path);
MaskFormat mask_format_from_path(const std::filesystem::path& path);

ThermalRaster parse_csv_raster(std::string_view text);
std::string format_csv_raster(const ThermalRaster& raster);

ThermalRaster load_raster(const std::filesystem::path& path, RasterFormat format,
                          std::optional<Pgm16Scaling> scaling = std::nullopt);
/// Pgm16 output picks offset = min and scale = (max - min) / 65535 and records
/// both in the header comment, so reloading is exact up to half a quantum.
void save_raster(const ThermalRaster& raster, const std::filesystem::path& path,
                 RasterFormat format);

std::string encode_mask(const BinaryMask& mask, MaskFormat format);
BinaryMask decode_mask(std::string_view bytes, MaskFormat format);
void save_mask(const BinaryMask& mask, const std::filesystem::path& path,
               MaskFormat format);
BinaryMask load_mask(const std::filesystem::path& path, MaskFormat format);

std::string read_file(const std::filesystem::path& path);
/// Writes to a sibling temp file, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

}  // namespace delamseg
