#pragma once

#include <span>
#include <string>
#include <vector>

#include "delamseg/extraction.hpp"
#include "delamseg/raster.hpp"

namespace delamseg {

/// |a & b| / |a | b|; 1.0 when both masks are empty.
double iou(const BinaryMask& a, const BinaryMask& b);

struct SweepRow {
  double delta = 0.0;
  std::size_t total_support_area = 0;
  /// |area - reference area| / reference area * 100, reference at delta 0.05.
  double area_diff_pct = 0.0;
  int max_step = 0;
  /// Regularized steps actually run (may stop early on stability).
  int steps_run = 0;
};

/// Runs the extraction once per delta (sorted ascending) and compares the
/// union support area against the finest step. `deltas` must contain 0.05.
std::vector<SweepRow> step_size_sweep(const ThermalRaster& t_s, const ExtractionConfig& cfg,
                                      std::span<const double> deltas);

/// Header `delta,total_support_area,area_diff_pct,max_step,steps_run`.
std::string format_sweep_csv(std::span<const SweepRow> rows);

}  // namespace delamseg
