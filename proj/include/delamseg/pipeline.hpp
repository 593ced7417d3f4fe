#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "delamseg/discrimination.hpp"
#include "delamseg/extraction.hpp"
#include "delamseg/smoothing.hpp"

namespace delamseg {

/// Which raster supplies the min-max weights of the regularized marker.
enum class WeightSource { Smoothed, Raw };

struct PipelineConfig {
  DiffusionParams diffusion;
  /// Presmoothing scale for the gradient map, applied to the diffused raster.
  double gradient_sigma = 1.0;
  ExtractionConfig extraction;
  WeightSource weight_source = WeightSource::Smoothed;
  RefParams ref;
  ScreeningBands bands;

  void validate() const;
};

struct StepReport {
  int step = 0;
  double offset = 0.0;
  std::size_t regions = 0;
  std::size_t support_area = 0;
  std::size_t accepted = 0;
  std::size_t too_small = 0;
  std::size_t mean_rejected = 0;
  std::size_t cv_rejected = 0;
  std::size_t excluded = 0;
};

struct SegmentReport {
  StopCause stop = StopCause::MaxSteps;
  int max_steps = 0;
  double contrast = 0.0;
  double kappa = 0.0;
  bool has_reference = false;
  ReferenceStats stats;
  TwoMeans clustering;
  std::size_t d_g_area = 0;
  std::vector<StepReport> steps;
  std::vector<int> area_regressions;
  std::size_t maxima_union_area = 0;
  std::size_t mask_area = 0;
  /// Final mask lies inside the union of all dome supports.
  bool subset_law = true;
};

struct SegmentResult {
  BinaryMask mask;
  BinaryMask maxima_union;
  ThermalRaster smoothed;
  GradientRaster gradient;
  SegmentReport report;
};

/// Smoothing, maxima extraction, reference estimation and per-step screening;
/// the mask is the union of every step's accepted regions. Failures surface as
/// StageError naming the stage.
SegmentResult segment(const ThermalRaster& raw, const PipelineConfig& cfg);

/// Human-readable multi-line summary.
std::string format_report_text(const SegmentReport& report, const PipelineConfig& cfg);

}  // namespace delamseg
