#include "delamseg/pipeline.hpp"

#include <cmath>
#include <sstream>

#include "delamseg/raster_io.hpp"

namespace delamseg {

void PipelineConfig::validate() const {
  diffusion.validate();
  if (!(gradient_sigma >= 0.0)) throw ParameterError("gradient sigma must be >= 0");
  extraction.validate();
  ref.validate();
  bands.validate();
}

namespace {

template <typename F>
auto run_stage(const char* stage, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(stage, e.what());
  }
}

}  // namespace

SegmentResult segment(const ThermalRaster& raw, const PipelineConfig& cfg) {
  run_stage("config", [&] { cfg.validate(); });
  SegmentResult result;
  SegmentReport& report = result.report;

  if (cfg.ref.exclusion_mask && !cfg.ref.exclusion_mask->same_shape(raw)) {
    throw StageError("config", "exclusion mask shape differs from input raster");
  }

  run_stage("smoothing", [&] {
    report.kappa = resolve_kappa(raw, cfg.diffusion);
    DiffusionParams resolved = cfg.diffusion;
    resolved.kappa = report.kappa;
    result.smoothed = diffuse(raw, resolved);
    result.gradient = gradient_magnitude(result.smoothed, cfg.gradient_sigma);
  });

  const auto sequence = run_stage("extraction", [&] {
    return extract_maxima_sequence(result.smoothed, cfg.extraction,
                                   cfg.weight_source == WeightSource::Raw ? &raw : nullptr);
  });
  report.stop = sequence.stop;
  report.max_steps = sequence.max_steps;
  report.contrast = sequence.contrast;
  report.area_regressions = sequence.area_regressions;
  result.maxima_union = sequence.support_union();
  result.mask = BinaryMask(raw.width(), raw.height());

  if (sequence.stop == StopCause::NoContrast) {
    report.steps.push_back({0, cfg.extraction.h_in});
    return result;
  }

  const auto reference = run_stage("reference", [&] {
    return reference_stats(result.gradient, cfg.ref, cfg.extraction.connectivity);
  });
  report.has_reference = true;
  report.stats = reference.stats;
  report.clustering = reference.clustering;
  report.d_g_area = reference.d_g.count();

  const BinaryMask* exclusion = cfg.ref.exclusion_mask ? &*cfg.ref.exclusion_mask : nullptr;
  run_stage("screening", [&] {
    for (const auto& step : sequence.steps) {
      const auto screened =
          screen_regions(step.regions, result.gradient, reference.stats, cfg.bands, exclusion);
      StepReport row;
      row.step = step.step;
      row.offset = step.offset;
      row.regions = step.regions.regions.size();
      row.support_area = step.regions.labeled_area();
      for (const auto& d : screened.decisions) {
        switch (d.verdict) {
          case Verdict::Accepted: ++row.accepted; break;
          case Verdict::TooSmall: ++row.too_small; break;
          case Verdict::MeanOutOfBand: ++row.mean_rejected; break;
          case Verdict::CvOutOfBand: ++row.cv_rejected; break;
          case Verdict::Excluded: ++row.excluded; break;
        }
      }
      report.steps.push_back(row);
      for (std::size_t i = 0; i < screened.kept.label_map.size(); ++i) {
        if (screened.kept.label_map[i] != 0) result.mask.set(i);
      }
    }
    if (exclusion) result.mask = mask_and_not(result.mask, *exclusion);
  });

  report.maxima_union_area = result.maxima_union.count();
  report.mask_area = result.mask.count();
  report.subset_law = mask_subset(result.mask, result.maxima_union);
  return result;
}

std::string format_report_text(const SegmentReport& report, const PipelineConfig& cfg) {
  std::ostringstream out;
  out << "delamination segmentation report\n";
  out << "  h_in = " << format_double(cfg.extraction.h_in)
      << " C, delta = " << format_double(cfg.extraction.delta) << " C\n";
  out << "  diffusion sigma = " << format_double(cfg.diffusion.sigma)
      << ", kappa = " << format_double(report.kappa)
      << ", iterations = " << cfg.diffusion.iterations << "\n";
  out << "  contrast = " << format_double(report.contrast)
      << " C, max steps = " << report.max_steps << ", steps run = "
      << (report.steps.empty() ? 0 : report.steps.back().step) << "\n";
  out << "  stop cause: " << to_string(report.stop) << "\n";
  if (report.has_reference) {
    out << "  reference: M_grad = " << format_double(report.stats.m_grad)
        << ", std = " << format_double(report.stats.delta_std)
        << ", V_var = " << format_double(report.stats.v_var)
        << ", D_g area = " << report.d_g_area << " px\n";
  } else {
    out << "  reference: not estimated\n";
  }
  out << "  maxima union area = " << report.maxima_union_area
      << " px, segmented area = " << report.mask_area << " px\n";
  out << "  subset law: " << (report.subset_law ? "holds" : "VIOLATED") << "\n";
  if (!report.area_regressions.empty()) {
    out << "  warning: total support area decreased at " << report.area_regressions.size()
        << " step(s)\n";
  }
  out << "  step  offset  regions  area  accepted  small  mean  cv  excluded\n";
  for (const auto& s : report.steps) {
    out << "  " << s.step << "  " << std::round(s.offset * 1e9) / 1e9 << "  " << s.regions << "  "
        << s.support_area << "  " << s.accepted << "  " << s.too_small << "  "
        << s.mean_rejected << "  " << s.cv_rejected << "  " << s.excluded << "\n";
  }
  return out.str();
}

}  // namespace delamseg
