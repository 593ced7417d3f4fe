#include "delamseg/synth.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "delamseg/components.hpp"
#include "delamseg/config.hpp"
#include "delamseg/raster_io.hpp"

namespace delamseg {

double Background::value(double x, double y) const noexcept {
  switch (kind) {
    case Kind::Constant:
      return base;
    case Kind::Ramp:
      return base + gx * x + gy * y;
    case Kind::Smooth: {
      const double k = 2.0 * std::numbers::pi / wavelength;
      return base + gx * x + gy * y + amplitude * std::sin(k * x) * std::cos(k * y);
    }
  }
  return base;
}

double Blob::value(double x, double y) const noexcept {
  const double dx = x - cx;
  const double dy = y - cy;
  const double r2 = dx * dx + dy * dy;
  if (profile == Profile::Gaussian) {
    return peak_contrast * std::exp(-0.5 * r2 / (radius * radius));
  }
  const auto logistic = [&](double r) { return 1.0 / (1.0 + std::exp((r - radius) / edge)); };
  return peak_contrast * logistic(std::sqrt(r2)) / logistic(0.0);
}

void SceneSpec::validate() const {
  if (width < 1 || height < 1) throw ParameterError("scene dimensions must be >= 1");
  if (!(noise_std >= 0.0)) throw ParameterError("noise_std must be >= 0");
  if (background.kind == Background::Kind::Smooth && !(background.wavelength > 0.0)) {
    throw ParameterError("background wavelength must be > 0");
  }
  for (std::size_t b = 0; b < blobs.size(); ++b) {
    const auto& blob = blobs[b];
    if (!(blob.radius >= 1.0)) {
      throw ParameterError("blob " + std::to_string(b) + ": radius must be >= 1");
    }
    if (blob.profile == Blob::Profile::Plateau && !(blob.edge > 0.0)) {
      throw ParameterError("blob " + std::to_string(b) + ": edge must be > 0");
    }
    const bool outside = blob.cx + blob.radius < 0.0 || blob.cy + blob.radius < 0.0 ||
                         blob.cx - blob.radius > width - 1 || blob.cy - blob.radius > height - 1;
    if (outside) {
      throw ParameterError("blob " + std::to_string(b) + " lies entirely outside the raster");
    }
  }
}

ThermalRaster render_noiseless(const SceneSpec& spec) {
  spec.validate();
  ThermalRaster raster(spec.width, spec.height);
  for (int y = 0; y < spec.height; ++y) {
    for (int x = 0; x < spec.width; ++x) {
      double v = spec.background.value(x, y);
      for (const auto& blob : spec.blobs) v += blob.value(x, y);
      raster(x, y) = v;
    }
  }
  return raster;
}

Scene gen_scene(const SceneSpec& spec) {
  Scene scene{render_noiseless(spec), {}};
  if (spec.noise_std > 0.0) {
    std::mt19937_64 engine(spec.seed);
    const auto uniform = [&] {
      return static_cast<double>(engine() >> 11) * 0x1.0p-53;
    };
    auto values = scene.raster.values();
    for (std::size_t i = 0; i < values.size(); i += 2) {
      const double u1 = uniform();
      const double u2 = uniform();
      const double radius = std::sqrt(-2.0 * std::log(1.0 - u1));
      const double angle = 2.0 * std::numbers::pi * u2;
      values[i] += spec.noise_std * radius * std::cos(angle);
      if (i + 1 < values.size()) values[i + 1] += spec.noise_std * radius * std::sin(angle);
    }
  }

  auto& truth = scene.truth;
  truth.defects = BinaryMask(spec.width, spec.height);
  for (const auto& blob : spec.blobs) {
    BinaryMask footprint(spec.width, spec.height);
    const double half = 0.5 * std::abs(blob.peak_contrast);
    for (int y = 0; y < spec.height; ++y) {
      for (int x = 0; x < spec.width; ++x) {
        if (blob.peak_contrast != 0.0 && std::abs(blob.value(x, y)) >= half) {
          footprint.set(footprint.index(x, y));
        }
      }
    }
    truth.defects = mask_or(truth.defects, footprint);
    std::vector<std::size_t> boundary;
    for (const auto& region : connected_components(footprint, Connectivity::Eight).regions) {
      boundary.insert(boundary.end(), region.inner_boundary.begin(), region.inner_boundary.end());
    }
    truth.footprints.push_back(std::move(footprint));
    truth.boundaries.push_back(std::move(boundary));
  }
  return scene;
}

Signal1D signal_fig1(double x_min, double x_max, int n_samples) {
  if (n_samples < 2) throw ParameterError("signal needs at least 2 samples");
  if (!(x_min < x_max)) throw ParameterError("signal range must satisfy x_min < x_max");
  Signal1D s;
  const double step = (x_max - x_min) / (n_samples - 1);
  for (int i = 0; i < n_samples; ++i) {
    const double x = i == n_samples - 1 ? x_max : x_min + i * step;
    const double f = std::sin(x) + 2.0 * std::cos(2.0 * x + 5.0) + 3.0 * std::sin(3.0 * x);
    s.x.push_back(x);
    s.f.push_back(f);
    s.g.push_back(f - 3.0);
  }
  return s;
}

namespace {

Background::Kind background_kind(const std::string& name) {
  if (name == "constant") return Background::Kind::Constant;
  if (name == "ramp") return Background::Kind::Ramp;
  if (name == "smooth") return Background::Kind::Smooth;
  throw ParseError("unknown background '" + name + "'");
}

std::string_view background_name(Background::Kind kind) {
  switch (kind) {
    case Background::Kind::Constant: return "constant";
    case Background::Kind::Ramp: return "ramp";
    case Background::Kind::Smooth: return "smooth";
  }
  return "constant";
}

}  // namespace

SceneSpec parse_scene_spec(std::string_view text) {
  const auto kv = KeyValues::parse(text);
  SceneSpec spec;
  std::map<int, Blob> blobs;
  for (const auto& [key, entry] : kv.entries()) {
    const auto& v = entry.value;
    if (key == "width") {
      spec.width = kv.get_int(key);
    } else if (key == "height") {
      spec.height = kv.get_int(key);
    } else if (key == "noise_std") {
      spec.noise_std = kv.get_double(key);
    } else if (key == "seed") {
      spec.seed = kv.get_u64(key);
    } else if (key == "background") {
      spec.background.kind = background_kind(v);
    } else if (key == "background.base") {
      spec.background.base = kv.get_double(key);
    } else if (key == "background.gx") {
      spec.background.gx = kv.get_double(key);
    } else if (key == "background.gy") {
      spec.background.gy = kv.get_double(key);
    } else if (key == "background.amplitude") {
      spec.background.amplitude = kv.get_double(key);
    } else if (key == "background.wavelength") {
      spec.background.wavelength = kv.get_double(key);
    } else if (key.rfind("blob.", 0) == 0) {
      const auto dot = key.find('.', 5);
      int index = -1;
      const auto idx_text = std::string_view(key).substr(5, dot == std::string::npos ? key.npos : dot - 5);
      const auto [ptr, ec] = std::from_chars(idx_text.data(), idx_text.data() + idx_text.size(), index);
      if (ec != std::errc() || ptr != idx_text.data() + idx_text.size() || index < 0 ||
          dot == std::string::npos) {
        throw ParseError("line " + std::to_string(entry.line) + ": bad blob key '" + key + "'");
      }
      auto& blob = blobs[index];
      const auto field = key.substr(dot + 1);
      if (field == "cx") {
        blob.cx = kv.get_double(key);
      } else if (field == "cy") {
        blob.cy = kv.get_double(key);
      } else if (field == "radius") {
        blob.radius = kv.get_double(key);
      } else if (field == "contrast") {
        blob.peak_contrast = kv.get_double(key);
      } else if (field == "edge") {
        blob.edge = kv.get_double(key);
      } else if (field == "profile") {
        if (v == "gaussian") {
          blob.profile = Blob::Profile::Gaussian;
        } else if (v == "plateau") {
          blob.profile = Blob::Profile::Plateau;
        } else {
          throw ParseError("line " + std::to_string(entry.line) + ": unknown profile '" + v + "'");
        }
      } else {
        throw ParseError("line " + std::to_string(entry.line) + ": unknown key '" + key + "'");
      }
    } else {
      throw ParseError("line " + std::to_string(entry.line) + ": unknown key '" + key + "'");
    }
  }
  int expected = 0;
  for (auto& [index, blob] : blobs) {
    if (index != expected++) throw ParseError("blob indices must be contiguous from 0");
    spec.blobs.push_back(blob);
  }
  spec.validate();
  return spec;
}

std::string format_scene_spec(const SceneSpec& spec) {
  KeyValues kv;
  kv.set("width", std::to_string(spec.width));
  kv.set("height", std::to_string(spec.height));
  kv.set("noise_std", format_double(spec.noise_std));
  kv.set("seed", std::to_string(spec.seed));
  kv.set("background", std::string(background_name(spec.background.kind)));
  kv.set("background.base", format_double(spec.background.base));
  kv.set("background.gx", format_double(spec.background.gx));
  kv.set("background.gy", format_double(spec.background.gy));
  kv.set("background.amplitude", format_double(spec.background.amplitude));
  kv.set("background.wavelength", format_double(spec.background.wavelength));
  for (std::size_t i = 0; i < spec.blobs.size(); ++i) {
    const auto& b = spec.blobs[i];
    const auto p = "blob." + std::to_string(i) + ".";
    kv.set(p + "cx", format_double(b.cx));
    kv.set(p + "cy", format_double(b.cy));
    kv.set(p + "radius", format_double(b.radius));
    kv.set(p + "contrast", format_double(b.peak_contrast));
    kv.set(p + "profile", b.profile == Blob::Profile::Gaussian ? "gaussian" : "plateau");
    kv.set(p + "edge", format_double(b.edge));
  }
  return kv.format();
}

SceneSpec load_scene_spec(const std::filesystem::path& path) {
  return parse_scene_spec(read_file(path));
}

}  // namespace delamseg
