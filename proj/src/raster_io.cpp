#include "delamseg/raster_io.hpp"

#include <unistd.h>

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

namespace delamseg {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    if (end == std::string_view::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  return lines;
}

std::vector<std::string_view> split_cells(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto end = line.find(',', start);
    if (end == std::string_view::npos) {
      cells.push_back(trim(line.substr(start)));
      return cells;
    }
    cells.push_back(trim(line.substr(start, end - start)));
    start = end + 1;
  }
}

bool is_nan_token(std::string_view cell) {
  return cell.empty() || cell == "nan" || cell == "NaN" || cell == "NAN";
}

double parse_number(std::string_view cell, std::size_t row, std::size_t col) {
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(value)) {
    throw ParseError("row " + std::to_string(row) + ", column " + std::to_string(col) +
                     ": cannot parse '" + std::string(cell) + "' as a number");
  }
  return value;
}

template <typename Cell>
void parse_csv_grid(std::string_view text, int& width, int& height, Cell&& on_cell) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw ParseError("row 1: file is empty");
  width = 0;
  height = static_cast<int>(lines.size());
  for (std::size_t r = 0; r < lines.size(); ++r) {
    const auto cells = split_cells(lines[r]);
    if (r == 0) {
      width = static_cast<int>(cells.size());
    } else if (static_cast<int>(cells.size()) != width) {
      throw ParseError("row " + std::to_string(r + 1) + " has " +
                       std::to_string(cells.size()) + " column" +
                       (cells.size() == 1 ? "" : "s") + ", expected " +
                       std::to_string(width));
    }
    for (std::size_t c = 0; c < cells.size(); ++c) on_cell(cells[c], r + 1, c + 1);
  }
}

void put_u32_le(std::string& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xFFu));
}

std::uint32_t get_u32_le(std::string_view bytes, std::size_t at) {
  std::uint32_t v = 0;
  for (int b = 0; b < 4; ++b) {
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[at + b])) << (8 * b);
  }
  return v;
}

constexpr std::string_view kF32Magic = "TRF1";

ThermalRaster decode_f32(std::string_view bytes) {
  if (bytes.size() < 16 || bytes.substr(0, 4) != kF32Magic) {
    throw ParseError("f32 raster: bad header (expected magic TRF1)");
  }
  const std::uint32_t w = get_u32_le(bytes, 4);
  const std::uint32_t h = get_u32_le(bytes, 8);
  if (w == 0 || h == 0 || w > (1u << 20) || h > (1u << 20)) {
    throw ParseError("f32 raster: bad header dimensions");
  }
  const std::size_t n = static_cast<std::size_t>(w) * h;
  if (bytes.size() != 16 + 4 * n) {
    throw ParseError("f32 raster: expected " + std::to_string(16 + 4 * n) +
                     " bytes, found " + std::to_string(bytes.size()));
  }
  std::vector<double> values(n);
  std::vector<std::uint8_t> nodata(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const float f = std::bit_cast<float>(get_u32_le(bytes, 16 + 4 * i));
    if (std::isnan(f)) {
      nodata[i] = 1;
    } else if (!std::isfinite(f)) {
      throw ParseError("f32 raster: row " + std::to_string(i / w + 1) + ", column " +
                       std::to_string(i % w + 1) + ": infinite value");
    } else {
      values[i] = f;
    }
  }
  return ThermalRaster(static_cast<int>(w), static_cast<int>(h), std::move(values),
                       std::move(nodata));
}

std::string encode_f32(const ThermalRaster& raster) {
  std::string out(kF32Magic);
  put_u32_le(out, static_cast<std::uint32_t>(raster.width()));
  put_u32_le(out, static_cast<std::uint32_t>(raster.height()));
  put_u32_le(out, 0);
  out.reserve(16 + 4 * raster.size());
  for (std::size_t i = 0; i < raster.size(); ++i) {
    const float f = raster.is_valid(i) ? static_cast<float>(raster[i])
                                       : std::numeric_limits<float>::quiet_NaN();
    put_u32_le(out, std::bit_cast<std::uint32_t>(f));
  }
  return out;
}

/// Minimal netpbm header reader: magic, width, height, maxval, with comments.
struct PgmHeader {
  int width = 0;
  int height = 0;
  int maxval = 0;
  std::size_t data_offset = 0;
  std::vector<std::string> comments;
};

PgmHeader read_pgm_header(std::string_view bytes) {
  PgmHeader header;
  if (bytes.size() < 2 || bytes.substr(0, 2) != "P5") {
    throw ParseError("pgm: bad header (expected P5 magic)");
  }
  std::size_t pos = 2;
  std::array<int, 3> fields{};
  for (int f = 0; f < 3; ++f) {
    while (pos < bytes.size()) {
      const char c = bytes[pos];
      if (c == '#') {
        const auto eol = bytes.find('\n', pos);
        header.comments.emplace_back(
            bytes.substr(pos + 1, (eol == std::string_view::npos ? bytes.size() : eol) - pos - 1));
        pos = eol == std::string_view::npos ? bytes.size() : eol + 1;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos;
      } else {
        break;
      }
    }
    const auto start = pos;
    while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos]))) ++pos;
    if (start == pos) throw ParseError("pgm: bad header (missing numeric field)");
    const auto [ptr, ec] = std::from_chars(bytes.data() + start, bytes.data() + pos, fields[f]);
    if (ec != std::errc()) throw ParseError("pgm: bad header (numeric field out of range)");
  }
  if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos]))) {
    throw ParseError("pgm: bad header (no separator before pixel data)");
  }
  header.width = fields[0];
  header.height = fields[1];
  header.maxval = fields[2];
  header.data_offset = pos + 1;
  if (header.width < 1 || header.height < 1 || header.maxval < 1 || header.maxval > 65535) {
    throw ParseError("pgm: bad header values");
  }
  return header;
}

std::optional<Pgm16Scaling> scaling_from_comments(const std::vector<std::string>& comments) {
  for (const auto& comment : comments) {
    std::istringstream in(comment);
    std::string token;
    std::optional<double> scale;
    std::optional<double> offset;
    while (in >> token) {
      const auto eq = token.find('=');
      if (eq == std::string::npos) continue;
      const auto key = token.substr(0, eq);
      const auto val = std::string_view(token).substr(eq + 1);
      double parsed = 0.0;
      const auto [ptr, ec] = std::from_chars(val.data(), val.data() + val.size(), parsed);
      if (ec != std::errc() || ptr != val.data() + val.size()) {
        throw ParseError("pgm: bad header comment value '" + token + "'");
      }
      if (key == "scale") scale = parsed;
      if (key == "offset") offset = parsed;
    }
    if (scale && offset) return Pgm16Scaling{*scale, *offset};
  }
  return std::nullopt;
}

ThermalRaster decode_pgm16(std::string_view bytes, std::optional<Pgm16Scaling> scaling) {
  const auto header = read_pgm_header(bytes);
  if (header.maxval < 256) throw ParseError("pgm16: maxval must exceed 255");
  const std::size_t n = static_cast<std::size_t>(header.width) * header.height;
  if (bytes.size() - header.data_offset != 2 * n) {
    throw ParseError("pgm16: expected " + std::to_string(2 * n) + " data bytes, found " +
                     std::to_string(bytes.size() - header.data_offset));
  }
  const auto s = scaling ? *scaling : scaling_from_comments(header.comments).value_or(Pgm16Scaling{});
  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto hi = static_cast<unsigned char>(bytes[header.data_offset + 2 * i]);
    const auto lo = static_cast<unsigned char>(bytes[header.data_offset + 2 * i + 1]);
    values[i] = s.offset + s.scale * static_cast<double>((hi << 8) | lo);
  }
  return ThermalRaster(header.width, header.height, std::move(values));
}

std::string encode_pgm16(const ThermalRaster& raster) {
  if (raster.has_nodata()) throw ParameterError("pgm16 cannot store nodata pixels");
  const auto range = valid_range(raster);
  const double scale = range.span() > 0.0 ? range.span() / 65535.0 : 1.0;
  std::string out = "P5\n# scale=" + format_double(scale) +
                    " offset=" + format_double(range.min) + "\n" +
                    std::to_string(raster.width()) + " " + std::to_string(raster.height()) +
                    "\n65535\n";
  for (double v : raster.values()) {
    const auto q = static_cast<std::uint32_t>(
        std::clamp(std::lround((v - range.min) / scale), 0L, 65535L));
    out.push_back(static_cast<char>(q >> 8));
    out.push_back(static_cast<char>(q & 0xFF));
  }
  return out;
}

}  // namespace

std::string format_double(double value) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

RasterFormat raster_format_from_string(std::string_view name) {
  if (name == "csv") return RasterFormat::Csv;
  if (name == "f32" || name == "f32-binary") return RasterFormat::F32Binary;
  if (name == "pgm16" || name == "pgm16+scale") return RasterFormat::Pgm16;
  throw ParameterError("unknown raster format '" + std::string(name) + "'");
}

MaskFormat mask_format_from_string(std::string_view name) {
  if (name == "pgm") return MaskFormat::Pgm;
  if (name == "csv") return MaskFormat::Csv;
  throw ParameterError("unknown mask format '" + std::string(name) + "'");
}

RasterFormat raster_format_from_path(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".csv") return RasterFormat::Csv;
  if (ext == ".f32" || ext == ".bin") return RasterFormat::F32Binary;
  if (ext == ".pgm") return RasterFormat::Pgm16;
  throw ParameterError("cannot infer raster format from '" + path.string() +
                       "'; pass --format");
}

MaskFormat mask_format_from_path(const std::filesystem::path& path) {
  return path.extension() == ".csv" ? MaskFormat::Csv : MaskFormat::Pgm;
}

ThermalRaster parse_csv_raster(std::string_view text) {
  std::vector<double> values;
  std::vector<std::uint8_t> nodata;
  int width = 0;
  int height = 0;
  parse_csv_grid(text, width, height, [&](std::string_view cell, std::size_t r, std::size_t c) {
    if (is_nan_token(cell)) {
      values.push_back(0.0);
      nodata.push_back(1);
    } else {
      values.push_back(parse_number(cell, r, c));
      nodata.push_back(0);
    }
  });
  return ThermalRaster(width, height, std::move(values), std::move(nodata));
}

std::string format_csv_raster(const ThermalRaster& raster) {
  std::string out;
  for (int y = 0; y < raster.height(); ++y) {
    for (int x = 0; x < raster.width(); ++x) {
      if (x > 0) out.push_back(',');
      const auto i = raster.index(x, y);
      out += raster.is_valid(i) ? format_double(raster[i]) : "nan";
    }
    out.push_back('\n');
  }
  return out;
}

ThermalRaster load_raster(const std::filesystem::path& path, RasterFormat format,
                          std::optional<Pgm16Scaling> scaling) {
  const auto bytes = read_file(path);
  switch (format) {
    case RasterFormat::Csv:
      return parse_csv_raster(bytes);
    case RasterFormat::F32Binary:
      return decode_f32(bytes);
    case RasterFormat::Pgm16:
      return decode_pgm16(bytes, scaling);
  }
  throw ParameterError("unknown raster format");
}

void save_raster(const ThermalRaster& raster, const std::filesystem::path& path,
                 RasterFormat format) {
  switch (format) {
    case RasterFormat::Csv:
      write_file_atomic(path, format_csv_raster(raster));
      return;
    case RasterFormat::F32Binary:
      write_file_atomic(path, encode_f32(raster));
      return;
    case RasterFormat::Pgm16:
      write_file_atomic(path, encode_pgm16(raster));
      return;
  }
}

std::string encode_mask(const BinaryMask& mask, MaskFormat format) {
  std::string out;
  if (format == MaskFormat::Pgm) {
    out = "P5\n" + std::to_string(mask.width()) + " " + std::to_string(mask.height()) +
          "\n255\n";
    for (auto v : mask.values()) out.push_back(static_cast<char>(v ? 255 : 0));
    return out;
  }
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (x > 0) out.push_back(',');
      out.push_back(mask(x, y) ? '1' : '0');
    }
    out.push_back('\n');
  }
  return out;
}

BinaryMask decode_mask(std::string_view bytes, MaskFormat format) {
  if (format == MaskFormat::Pgm) {
    const auto header = read_pgm_header(bytes);
    if (header.maxval > 255) throw ParseError("pgm mask: maxval must be at most 255");
    const std::size_t n = static_cast<std::size_t>(header.width) * header.height;
    if (bytes.size() - header.data_offset != n) {
      throw ParseError("pgm mask: expected " + std::to_string(n) + " data bytes, found " +
                       std::to_string(bytes.size() - header.data_offset));
    }
    std::vector<std::uint8_t> values(n);
    for (std::size_t i = 0; i < n; ++i) values[i] = bytes[header.data_offset + i] != 0;
    return BinaryMask(header.width, header.height, std::move(values));
  }
  std::vector<std::uint8_t> values;
  int width = 0;
  int height = 0;
  parse_csv_grid(bytes, width, height, [&](std::string_view cell, std::size_t r, std::size_t c) {
    if (cell == "0") {
      values.push_back(0);
    } else if (cell == "1") {
      values.push_back(1);
    } else {
      throw ParseError("row " + std::to_string(r) + ", column " + std::to_string(c) +
                       ": mask cells must be 0 or 1, got '" + std::string(cell) + "'");
    }
  });
  return BinaryMask(width, height, std::move(values));
}

void save_mask(const BinaryMask& mask, const std::filesystem::path& path, MaskFormat format) {
  write_file_atomic(path, encode_mask(mask, format));
}

BinaryMask load_mask(const std::filesystem::path& path, MaskFormat format) {
  return decode_mask(read_file(path), format);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error reading '" + path.string() + "'");
  return std::move(buf).str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view bytes) {
  auto tmp = path;
  tmp += ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw IoError("error writing '" + path.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move output into place at '" + path.string() + "'");
  }
}

}  // namespace delamseg
