#include "delamseg/eval.hpp"

#include <algorithm>
#include <cmath>

#include "delamseg/raster_io.hpp"

namespace delamseg {

double iou(const BinaryMask& a, const BinaryMask& b) {
  if (!a.same_shape(b)) throw PreconditionError("iou: mask shapes differ");
  std::size_t inter = 0;
  std::size_t uni = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    inter += (a.test(i) && b.test(i)) ? 1 : 0;
    uni += (a.test(i) || b.test(i)) ? 1 : 0;
  }
  return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

std::vector<SweepRow> step_size_sweep(const ThermalRaster& t_s, const ExtractionConfig& cfg,
                                      std::span<const double> deltas) {
  std::vector<double> sorted(deltas.begin(), deltas.end());
  std::sort(sorted.begin(), sorted.end());
  const auto finest = std::find_if(sorted.begin(), sorted.end(), [](double d) {
    return std::abs(d - ExtractionConfig::kMinDelta) < 1e-12;
  });
  if (finest == sorted.end()) {
    throw ParameterError("step-size sweep needs the finest step 0.05 among the deltas");
  }

  std::vector<SweepRow> rows;
  for (double delta : sorted) {
    ExtractionConfig run = cfg;
    run.delta = delta;
    const auto seq = extract_maxima_sequence(t_s, run);
    SweepRow row;
    row.delta = delta;
    row.total_support_area = seq.support_union().count();
    row.max_step = seq.max_steps;
    row.steps_run = seq.steps.back().step;
    rows.push_back(row);
  }
  const auto ref_index = static_cast<std::size_t>(finest - sorted.begin());
  const double ref_area = static_cast<double>(rows[ref_index].total_support_area);
  for (auto& row : rows) {
    const double diff = std::abs(static_cast<double>(row.total_support_area) - ref_area);
    row.area_diff_pct = ref_area > 0.0 ? 100.0 * diff / ref_area : 0.0;
  }
  return rows;
}

std::string format_sweep_csv(std::span<const SweepRow> rows) {
  std::string out = "delta,total_support_area,area_diff_pct,max_step,steps_run\n";
  for (const auto& r : rows) {
    out += format_double(r.delta) + "," + std::to_string(r.total_support_area) + "," +
           format_double(r.area_diff_pct) + "," + std::to_string(r.max_step) + "," +
           std::to_string(r.steps_run) + "\n";
  }
  return out;
}

}  // namespace delamseg
