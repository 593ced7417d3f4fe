#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "delamseg/components.hpp"
#include "delamseg/raster.hpp"

namespace delamseg {

/// Gradient statistics of the delamination boundary.
struct ReferenceStats {
  double m_grad = 0.0;
  double delta_std = 0.0;
  /// Coefficient of variation, delta_std / m_grad.
  double v_var = 0.0;

  /// Requires mean > 0 and std >= 0.
  static ReferenceStats from_moments(double mean, double std);
  /// Mean and population standard deviation of `values`.
  static ReferenceStats from_values(std::span<const double> values);
};

/// Acceptance bands around ReferenceStats:
/// mean in [m - f * std, m + f * std], CV in [low * v_var, high * v_var].
struct ScreeningBands {
  double mean_halfwidth_factor = 0.5;
  double cv_low_factor = 0.5;
  double cv_high_factor = 1.9;

  void validate() const;
};

struct RefParams {
  int min_area = 25;
  /// Pixels (road paint, joints) removed before clustering and from the
  /// final segmentation.
  std::optional<BinaryMask> exclusion_mask;

  void validate() const;
};

struct TwoMeans {
  double threshold = 0.0;
  double low_mean = 0.0;
  double high_mean = 0.0;
};

/// Exact 1-D two-cluster k-means: the split of the sorted values minimizing
/// the within-cluster sum of squares. Equal values never straddle the split.
/// Throws DegenerateInputError on fewer than 2 distinct values.
TwoMeans two_means_1d(std::span<const double> values);

struct Reference {
  ReferenceStats stats;
  /// The estimated boundary support D_g.
  BinaryMask d_g;
  TwoMeans clustering;
};

/// Clusters the positive, non-excluded gradients into two groups, keeps the
/// high group, drops components smaller than min_area and measures the rest.
Reference reference_stats(const GradientRaster& g_s, const RefParams& params,
                          Connectivity connectivity = Connectivity::Eight);

enum class Verdict { Accepted, TooSmall, MeanOutOfBand, CvOutOfBand, Excluded };

std::string_view to_string(Verdict verdict) noexcept;

struct RegionScreen {
  int region_id = 0;
  std::size_t boundary_pixels = 0;
  double boundary_mean = 0.0;
  double boundary_cv = 0.0;
  Verdict verdict = Verdict::Accepted;
};

struct ScreenResult {
  RegionSet kept;
  std::vector<RegionScreen> decisions;
};

/// Keeps a region when the gradient over its inner boundary has mean and CV
/// inside both bands. Regions with fewer than 3 boundary pixels are rejected
/// as too small; regions with more than half their area in `exclusion` are
/// rejected as excluded.
ScreenResult screen_regions(const RegionSet& regions, const GradientRaster& g_s,
                            const ReferenceStats& stats, const ScreeningBands& bands,
                            const BinaryMask* exclusion = nullptr);

}  // namespace delamseg
