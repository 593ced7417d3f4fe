#include "delamseg/config.hpp"

#include <algorithm>
#include <charconv>

#include "delamseg/raster_io.hpp"

namespace delamseg {

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (!s.empty() && ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && ws(s.back())) s.remove_suffix(1);
  return s;
}

template <typename T>
T parse_as(const std::string& key, const KeyValues::Entry& e, const char* what) {
  T value{};
  std::string_view text = e.value;
  if constexpr (std::is_floating_point_v<T>) {
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  }
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ParseError("line " + std::to_string(e.line) + ": key '" + key + "' expects " + what +
                     ", got '" + e.value + "'");
  }
  return value;
}

}  // namespace

KeyValues KeyValues::parse(std::string_view text) {
  KeyValues kv;
  int line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const auto line = trim(text.substr(start, end - start));
    ++line_no;
    start = end + 1;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("line " + std::to_string(line_no) + ": expected key=value");
    }
    const std::string key(trim(line.substr(0, eq)));
    if (key.empty()) throw ParseError("line " + std::to_string(line_no) + ": empty key");
    if (kv.contains(key)) {
      throw ParseError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
    kv.entries_.push_back({key, Entry{std::string(trim(line.substr(eq + 1))), line_no}});
  }
  return kv;
}

void KeyValues::set(const std::string& key, std::string value) {
  auto it = std::find_if(entries_.begin(), entries_.end(),
                         [&](const auto& e) { return e.first == key; });
  if (it != entries_.end()) {
    it->second.value = std::move(value);
  } else {
    entries_.push_back({key, Entry{std::move(value), 0}});
  }
}

bool KeyValues::contains(std::string_view key) const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [&](const auto& e) { return e.first == key; });
}

const KeyValues::Entry& KeyValues::entry(std::string_view key) const {
  auto it = std::find_if(entries_.begin(), entries_.end(),
                         [&](const auto& e) { return e.first == key; });
  if (it == entries_.end()) throw ParseError("missing key '" + std::string(key) + "'");
  return it->second;
}

const std::string& KeyValues::get(std::string_view key) const { return entry(key).value; }

double KeyValues::get_double(std::string_view key) const {
  return parse_as<double>(std::string(key), entry(key), "a number");
}

int KeyValues::get_int(std::string_view key) const {
  return parse_as<int>(std::string(key), entry(key), "an integer");
}

std::uint64_t KeyValues::get_u64(std::string_view key) const {
  return parse_as<std::uint64_t>(std::string(key), entry(key), "an unsigned integer");
}

std::string KeyValues::format() const {
  std::string out;
  for (const auto& [key, e] : entries_) out += key + "=" + e.value + "\n";
  return out;
}

RunConfig apply_config(const KeyValues& kv, RunConfig base) {
  auto& p = base.pipeline;
  for (const auto& [raw_key, e] : kv.entries()) {
    std::string_view key = raw_key;
    if (key.rfind("report.", 0) == 0) continue;
    if (key.rfind("config.", 0) == 0) key.remove_prefix(7);
    const auto num = [&] { return kv.get_double(raw_key); };
    const auto integer = [&] { return kv.get_int(raw_key); };
    const auto bad = [&](const std::string& why) {
      return ParseError("line " + std::to_string(e.line) + ": key '" + raw_key + "' " + why);
    };
    if (key == "diffusion.sigma") {
      p.diffusion.sigma = num();
    } else if (key == "diffusion.kappa") {
      if (e.value == "auto") {
        p.diffusion.kappa.reset();
      } else {
        p.diffusion.kappa = num();
      }
    } else if (key == "diffusion.tau") {
      p.diffusion.tau = num();
    } else if (key == "diffusion.iterations") {
      p.diffusion.iterations = integer();
    } else if (key == "gradient.sigma") {
      p.gradient_sigma = num();
    } else if (key == "extraction.h_in") {
      p.extraction.h_in = num();
    } else if (key == "extraction.delta") {
      p.extraction.delta = num();
    } else if (key == "extraction.connectivity") {
      p.extraction.connectivity = connectivity_from_int(integer());
      p.extraction.morph.se = StructuringElement::for_connectivity(p.extraction.connectivity);
    } else if (key == "extraction.plateau_eps") {
      p.extraction.morph.plateau_eps = num();
    } else if (key == "extraction.q_threshold") {
      p.extraction.stability.q_threshold = num();
    } else if (key == "extraction.patience") {
      p.extraction.stability.patience = integer();
    } else if (key == "extraction.stability") {
      if (e.value != "on" && e.value != "off") throw bad("expects on|off");
      p.extraction.stability.enabled = e.value == "on";
    } else if (key == "extraction.max_steps") {
      if (e.value == "auto") {
        p.extraction.max_steps_override.reset();
      } else {
        p.extraction.max_steps_override = integer();
      }
    } else if (key == "extraction.weight_source") {
      if (e.value == "smoothed") {
        p.weight_source = WeightSource::Smoothed;
      } else if (e.value == "raw") {
        p.weight_source = WeightSource::Raw;
      } else {
        throw bad("expects smoothed|raw");
      }
    } else if (key == "reference.min_area") {
      p.ref.min_area = integer();
    } else if (key == "bands.mean_halfwidth") {
      p.bands.mean_halfwidth_factor = num();
    } else if (key == "bands.cv_low") {
      p.bands.cv_low_factor = num();
    } else if (key == "bands.cv_high") {
      p.bands.cv_high_factor = num();
    } else if (key == "io.exclusion_mask") {
      base.exclusion_mask_path = e.value;
    } else {
      throw bad("is not recognized");
    }
  }
  return base;
}

KeyValues to_key_values(const RunConfig& cfg, std::string_view prefix) {
  const auto& p = cfg.pipeline;
  KeyValues kv;
  const auto put = [&](const char* key, std::string value) {
    kv.set(std::string(prefix) + key, std::move(value));
  };
  put("diffusion.sigma", format_double(p.diffusion.sigma));
  put("diffusion.kappa", p.diffusion.kappa ? format_double(*p.diffusion.kappa) : "auto");
  put("diffusion.tau", format_double(p.diffusion.tau));
  put("diffusion.iterations", std::to_string(p.diffusion.iterations));
  put("gradient.sigma", format_double(p.gradient_sigma));
  put("extraction.h_in", format_double(p.extraction.h_in));
  put("extraction.delta", format_double(p.extraction.delta));
  put("extraction.connectivity", std::to_string(static_cast<int>(p.extraction.connectivity)));
  put("extraction.plateau_eps", format_double(p.extraction.morph.plateau_eps));
  put("extraction.q_threshold", format_double(p.extraction.stability.q_threshold));
  put("extraction.patience", std::to_string(p.extraction.stability.patience));
  put("extraction.stability", p.extraction.stability.enabled ? "on" : "off");
  put("extraction.max_steps", p.extraction.max_steps_override
                                  ? std::to_string(*p.extraction.max_steps_override)
                                  : "auto");
  put("extraction.weight_source", p.weight_source == WeightSource::Raw ? "raw" : "smoothed");
  put("reference.min_area", std::to_string(p.ref.min_area));
  put("bands.mean_halfwidth", format_double(p.bands.mean_halfwidth_factor));
  put("bands.cv_low", format_double(p.bands.cv_low_factor));
  put("bands.cv_high", format_double(p.bands.cv_high_factor));
  put("io.exclusion_mask", cfg.exclusion_mask_path);
  return kv;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  return apply_config(KeyValues::parse(read_file(path)));
}

}  // namespace delamseg
