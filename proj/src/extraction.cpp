#include "delamseg/extraction.hpp"

#include <cmath>
#include <string>

#include "delamseg/raster_io.hpp"

namespace delamseg {

void StabilityParams::validate() const {
  if (!(q_threshold > 0.0)) throw ParameterError("stability q_threshold must be > 0");
  if (patience < 1) throw ParameterError("stability patience must be >= 1");
}

void ExtractionConfig::validate() const {
  if (!(h_in > 0.0)) throw ParameterError("h_in must be > 0");
  // Tolerate the decimal literal 0.05 arriving as 0.049999...
  if (!(delta >= kMinDelta - 1e-12)) {
    throw ParameterError("delta must be >= 0.05 (sensor sensitivity floor), got " +
                         format_double(delta));
  }
  if (!(h_in > morph.plateau_eps)) throw ParameterError("h_in must exceed plateau_eps");
  morph.validate();
  stability.validate();
  if (max_steps_override && *max_steps_override < 0) {
    throw ParameterError("max_steps override must be >= 0");
  }
}

std::string_view to_string(StopCause cause) noexcept {
  switch (cause) {
    case StopCause::NoContrast:
      return "no contrast";
    case StopCause::MaxSteps:
      return "max steps";
    case StopCause::Stable:
      return "stable";
    case StopCause::Empty:
      return "empty";
  }
  return "unknown";
}

BinaryMask MaximaSequence::support_union() const {
  if (steps.empty()) return {};
  const auto& first = steps.front().regions;
  BinaryMask out(first.width, first.height);
  for (const auto& s : steps) {
    for (std::size_t i = 0; i < s.regions.label_map.size(); ++i) {
      if (s.regions.label_map[i] != 0) out.set(i);
    }
  }
  return out;
}

int max_steps(double max_contrast, double delta) {
  if (!(max_contrast > 0.0)) throw ParameterError("max_contrast must be > 0");
  if (!(delta > 0.0)) throw ParameterError("delta must be > 0");
  // 3.3 / 0.1 evaluates to 32.999999999999996 in binary floating point.
  return static_cast<int>(std::floor(max_contrast / delta + 1e-9));
}

double stability_score(double area_prev, double area_cur, double area_next) {
  if (!(area_cur > 0.0)) throw PreconditionError("stability score undefined for zero area");
  return (area_next - area_prev) / area_cur;
}

MaximaSequence extract_maxima_sequence(const ThermalRaster& t_s, const ExtractionConfig& cfg,
                                       const ThermalRaster* weight_source) {
  cfg.validate();
  MaximaSequence seq;
  const auto range = valid_range(t_s);
  seq.contrast = range.span();

  if (seq.contrast <= cfg.morph.plateau_eps) {
    RegionSet empty;
    empty.width = t_s.width();
    empty.height = t_s.height();
    empty.connectivity = cfg.connectivity;
    empty.label_map.assign(t_s.size(), 0);
    seq.steps.push_back({0, cfg.h_in, std::move(empty)});
    seq.stop = StopCause::NoContrast;
    seq.max_steps = 0;
    return seq;
  }

  seq.max_steps = cfg.max_steps_override ? *cfg.max_steps_override
                                         : max_steps(seq.contrast, cfg.delta);

  // Nodata pixels sit at the valid minimum so they never form a dome.
  const ThermalRaster image = t_s.has_nodata() ? fill_nodata(t_s, range.min) : t_s;
  const ThermalRaster& weights = weight_source ? *weight_source : t_s;

  const auto support_of = [&](Dome dome) {
    if (!t_s.has_nodata()) return std::move(dome.support);
    auto mask = dome.support.to_mask();
    for (std::size_t i = 0; i < mask.size(); ++i) {
      if (!t_s.is_valid(i)) mask.set(i, false);
    }
    return connected_components(mask, cfg.connectivity);
  };

  seq.steps.push_back({0, cfg.h_in, support_of(h_dome(image, cfg.h_in, cfg.morph,
                                                      cfg.connectivity))});
  std::vector<double> areas{static_cast<double>(seq.steps[0].regions.labeled_area())};
  int empty_run = seq.steps[0].regions.empty() ? 1 : 0;
  int stable_run = 0;
  seq.stop = StopCause::MaxSteps;

  for (int n = 1; n <= seq.max_steps; ++n) {
    const double offset = cfg.h_in + n * cfg.delta;
    const auto marker = regularized_marker(image, offset, weights);
    seq.steps.push_back({n, offset, support_of(dome_from_marker(image, marker, cfg.morph,
                                                                cfg.connectivity))});
    const double area = static_cast<double>(seq.steps.back().regions.labeled_area());
    if (n >= 2 && area < areas.back()) seq.area_regressions.push_back(n);
    areas.push_back(area);

    empty_run = seq.steps.back().regions.empty() ? empty_run + 1 : 0;
    if (empty_run >= 2) {
      seq.stop = StopCause::Empty;
      break;
    }

    // The score at step n-1 needs areas n-2, n-1 and n; step 0 uses a
    // different marker, so scoring starts at step 2.
    if (cfg.stability.enabled && n >= 3) {
      const double cur = areas[n - 1];
      const bool stable =
          cur > 0.0 &&
          std::abs(stability_score(areas[n - 2], cur, areas[n])) < cfg.stability.q_threshold;
      stable_run = stable ? stable_run + 1 : 0;
      if (stable_run >= cfg.stability.patience) {
        seq.stop = StopCause::Stable;
        break;
      }
    }
  }
  return seq;
}

}  // namespace delamseg
