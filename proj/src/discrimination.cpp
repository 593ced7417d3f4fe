#include "delamseg/discrimination.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "delamseg/stats.hpp"

namespace delamseg {

ReferenceStats ReferenceStats::from_moments(double mean, double std) {
  if (!(mean > 0.0)) throw PreconditionError("reference gradient mean must be > 0");
  if (!(std >= 0.0)) throw PreconditionError("reference standard deviation must be >= 0");
  return ReferenceStats{mean, std, std / mean};
}

ReferenceStats ReferenceStats::from_values(std::span<const double> values) {
  return from_moments(mean(values), stddev(values));
}

void ScreeningBands::validate() const {
  if (!(mean_halfwidth_factor >= 0.0)) {
    throw ParameterError("mean band half-width factor must be >= 0");
  }
  if (!(cv_low_factor > 0.0 && cv_low_factor < cv_high_factor)) {
    throw ParameterError("CV band factors must satisfy 0 < low < high");
  }
}

void RefParams::validate() const {
  if (min_area < 1) throw ParameterError("min_area must be >= 1");
}

TwoMeans two_means_1d(std::span<const double> values) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  if (n < 2 || sorted.front() == sorted.back()) {
    throw DegenerateInputError("two-means clustering needs at least 2 distinct values");
  }
  // Centering keeps the prefix sums of squares well conditioned.
  const double shift = sorted[n / 2];
  std::vector<double> s1(n + 1, 0.0);
  std::vector<double> s2(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double v = sorted[i] - shift;
    s1[i + 1] = s1[i] + v;
    s2[i + 1] = s2[i] + v * v;
  }
  const auto sse = [&](std::size_t lo, std::size_t hi) {  // [lo, hi)
    const double cnt = static_cast<double>(hi - lo);
    const double sum = s1[hi] - s1[lo];
    return (s2[hi] - s2[lo]) - sum * sum / cnt;
  };
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_split = 0;
  for (std::size_t k = 1; k < n; ++k) {
    if (sorted[k] == sorted[k - 1]) continue;
    const double cost = sse(0, k) + sse(k, n);
    if (cost < best) {
      best = cost;
      best_split = k;
    }
  }
  TwoMeans out;
  out.low_mean = shift + s1[best_split] / static_cast<double>(best_split);
  out.high_mean = shift + (s1[n] - s1[best_split]) / static_cast<double>(n - best_split);
  out.threshold = 0.5 * (out.low_mean + out.high_mean);
  return out;
}

Reference reference_stats(const GradientRaster& g_s, const RefParams& params,
                          Connectivity connectivity) {
  params.validate();
  const BinaryMask* exclusion = params.exclusion_mask ? &*params.exclusion_mask : nullptr;
  if (exclusion && !exclusion->same_shape(g_s)) {
    throw PreconditionError("exclusion mask shape differs from gradient map");
  }
  std::vector<double> positive;
  positive.reserve(g_s.size());
  for (std::size_t i = 0; i < g_s.size(); ++i) {
    if (exclusion && exclusion->test(i)) continue;
    if (g_s[i] > 0.0) positive.push_back(g_s[i]);
  }
  Reference ref;
  ref.clustering = two_means_1d(positive);

  BinaryMask candidate(g_s.width(), g_s.height());
  for (std::size_t i = 0; i < g_s.size(); ++i) {
    if (exclusion && exclusion->test(i)) continue;
    candidate.set(i, g_s[i] > ref.clustering.threshold);
  }
  const auto components = connected_components(candidate, connectivity);
  ref.d_g = filter_regions(components, [&](const Region& r) {
              return r.area >= static_cast<std::size_t>(params.min_area);
            }).to_mask();

  std::vector<double> samples;
  for (std::size_t i = 0; i < g_s.size(); ++i) {
    if (ref.d_g.test(i)) samples.push_back(g_s[i]);
  }
  if (samples.empty()) {
    throw NoReferenceError("no boundary component reaches min_area = " +
                           std::to_string(params.min_area) + " pixels");
  }
  ref.stats = ReferenceStats::from_values(samples);
  return ref;
}

std::string_view to_string(Verdict verdict) noexcept {
  switch (verdict) {
    case Verdict::Accepted:
      return "accepted";
    case Verdict::TooSmall:
      return "too-small";
    case Verdict::MeanOutOfBand:
      return "mean-out-of-band";
    case Verdict::CvOutOfBand:
      return "cv-out-of-band";
    case Verdict::Excluded:
      return "excluded";
  }
  return "unknown";
}

ScreenResult screen_regions(const RegionSet& regions, const GradientRaster& g_s,
                            const ReferenceStats& stats, const ScreeningBands& bands,
                            const BinaryMask* exclusion) {
  bands.validate();
  if (regions.width != g_s.width() || regions.height != g_s.height()) {
    if (!regions.regions.empty()) throw PreconditionError("region and gradient shapes differ");
  }
  if (exclusion && !exclusion->same_shape(g_s)) {
    throw PreconditionError("exclusion mask shape differs from gradient map");
  }
  const double mean_lo = stats.m_grad - bands.mean_halfwidth_factor * stats.delta_std;
  const double mean_hi = stats.m_grad + bands.mean_halfwidth_factor * stats.delta_std;
  const double cv_lo = bands.cv_low_factor * stats.v_var;
  const double cv_hi = bands.cv_high_factor * stats.v_var;

  ScreenResult result;
  std::vector<double> samples;
  for (const auto& region : regions.regions) {
    RegionScreen screen;
    screen.region_id = region.id;
    screen.boundary_pixels = region.inner_boundary.size();

    std::size_t excluded = 0;
    if (exclusion) {
      for (auto p : region.pixels) excluded += exclusion->test(p) ? 1 : 0;
    }
    samples.clear();
    for (auto p : region.inner_boundary) samples.push_back(g_s[p]);

    if (2 * excluded > region.area) {
      screen.verdict = Verdict::Excluded;
    } else if (samples.size() < 3) {
      screen.verdict = Verdict::TooSmall;
    } else {
      screen.boundary_mean = mean(samples);
      const double sd = stddev(samples);
      screen.boundary_cv = screen.boundary_mean > 0.0
                               ? sd / screen.boundary_mean
                               : std::numeric_limits<double>::infinity();
      if (screen.boundary_mean < mean_lo || screen.boundary_mean > mean_hi) {
        screen.verdict = Verdict::MeanOutOfBand;
      } else if (screen.boundary_cv < cv_lo || screen.boundary_cv > cv_hi) {
        screen.verdict = Verdict::CvOutOfBand;
      } else {
        screen.verdict = Verdict::Accepted;
      }
    }
    result.decisions.push_back(screen);
  }
  result.kept = filter_regions(regions, [&](const Region& r) {
    return result.decisions[static_cast<std::size_t>(r.id - 1)].verdict == Verdict::Accepted;
  });
  return result;
}

}  // namespace delamseg
