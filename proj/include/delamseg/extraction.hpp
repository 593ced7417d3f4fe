#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "delamseg/components.hpp"
#include "delamseg/morphology.hpp"
#include "delamseg/raster.hpp"

namespace delamseg {

/// Optional early stop on total dome-support area. The relative growth rate
/// q = (A[n+1] - A[n-1]) / A[n] must stay below q_threshold in magnitude for
/// `patience` consecutive steps. Off by default: the stop point depends on
/// the step size, which breaks comparisons across step sizes.
struct StabilityParams {
  double q_threshold = 0.05;
  int patience = 3;
  bool enabled = false;

  void validate() const;
};

struct ExtractionConfig {
  double h_in = 0.5;
  double delta = 0.1;
  MorphSettings morph;
  Connectivity connectivity = Connectivity::Eight;
  StabilityParams stability;
  std::optional<int> max_steps_override;

  static constexpr double kMinDelta = 0.05;

  void validate() const;
};

struct MaximaStep {
  int step = 0;
  double offset = 0.0;
  RegionSet regions;
};

enum class StopCause { NoContrast, MaxSteps, Stable, Empty };

std::string_view to_string(StopCause cause) noexcept;

struct MaximaSequence {
  /// Entry 0 is the plain h-dome at h_in; entries n >= 1 use the regularized
  /// marker at h_in + n * delta.
  std::vector<MaximaStep> steps;
  StopCause stop = StopCause::MaxSteps;
  int max_steps = 0;
  double contrast = 0.0;
  /// Steps n >= 2 whose total support area fell below that of step n-1.
  std::vector<int> area_regressions;

  /// Pixel union of every step's regions.
  BinaryMask support_union() const;
};

/// floor(max_contrast / delta), tolerant of binary rounding of the quotient.
int max_steps(double max_contrast, double delta);

/// (area_next - area_prev) / area_cur. Throws PreconditionError on area_cur == 0.
double stability_score(double area_prev, double area_cur, double area_next);

/// Runs the top-down maxima loop on an already smoothed raster. Regularization
/// weights come from `weight_source` when given, otherwise from `t_s`.
MaximaSequence extract_maxima_sequence(const ThermalRaster& t_s, const ExtractionConfig& cfg,
                                       const ThermalRaster* weight_source = nullptr);

}  // namespace delamseg
