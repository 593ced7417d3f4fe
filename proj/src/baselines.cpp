#include "delamseg/baselines.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "delamseg/stats.hpp"

namespace delamseg {

double resolve_threshold(const ThermalRaster& raster, const ThresholdSpec& spec) {
  if (spec.kind == ThresholdSpec::Kind::Absolute) return spec.value;
  if (!(spec.value >= 0.0 && spec.value <= 100.0)) {
    throw ParameterError("percentile must lie in [0, 100]");
  }
  std::vector<double> valid;
  valid.reserve(raster.size());
  for (std::size_t i = 0; i < raster.size(); ++i) {
    if (raster.is_valid(i)) valid.push_back(raster[i]);
  }
  return percentile_linear(std::move(valid), spec.value);
}

BinaryMask threshold_segment(const ThermalRaster& raster, const ThresholdSpec& spec) {
  const double theta = resolve_threshold(raster, spec);
  BinaryMask mask(raster.width(), raster.height());
  for (std::size_t i = 0; i < raster.size(); ++i) {
    mask.set(i, raster.is_valid(i) && raster[i] > theta);
  }
  return mask;
}

std::size_t KMeans1D::cluster_of(double v) const noexcept {
  for (std::size_t c = 0; c + 1 < upper.size(); ++c) {
    if (v <= upper[c]) return c;
  }
  return upper.empty() ? 0 : upper.size() - 1;
}

namespace {

struct WeightedPrefix {
  std::vector<double> w;
  std::vector<double> s1;
  std::vector<double> s2;
  double shift = 0.0;

  // Weighted SSE of unique values [i, j] inclusive.
  double cost(std::size_t i, std::size_t j) const {
    const double cnt = w[j + 1] - w[i];
    const double sum = s1[j + 1] - s1[i];
    return std::max(0.0, (s2[j + 1] - s2[i]) - sum * sum / cnt);
  }
  double mean(std::size_t i, std::size_t j) const {
    return shift + (s1[j + 1] - s1[i]) / (w[j + 1] - w[i]);
  }
};

// Fills row `cur` for columns [jlo, jhi] given that the optimal split index
// is monotone in j and lies in [olo, ohi].
void fill_row(const WeightedPrefix& pre, const std::vector<double>& prev, std::vector<double>& cur,
              std::vector<std::size_t>& arg, std::size_t jlo, std::size_t jhi, std::size_t olo,
              std::size_t ohi) {
  if (jlo > jhi) return;
  const std::size_t j = jlo + (jhi - jlo) / 2;
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_i = olo;
  for (std::size_t i = olo; i <= std::min(j, ohi); ++i) {
    const double c = prev[i - 1] + pre.cost(i, j);
    if (c < best) {
      best = c;
      best_i = i;
    }
  }
  cur[j] = best;
  arg[j] = best_i;
  if (j > jlo) fill_row(pre, prev, cur, arg, jlo, j - 1, olo, best_i);
  fill_row(pre, prev, cur, arg, j + 1, jhi, best_i, ohi);
}

}  // namespace

KMeans1D kmeans_1d_exact(std::span<const double> values, int k) {
  if (k < 1) throw ParameterError("k must be >= 1");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> unique;
  std::vector<double> weight;
  for (double v : sorted) {
    if (unique.empty() || v != unique.back()) {
      unique.push_back(v);
      weight.push_back(1.0);
    } else {
      weight.back() += 1.0;
    }
  }
  const std::size_t m = unique.size();
  const auto kk = static_cast<std::size_t>(k);
  if (m < kk) {
    throw DegenerateInputError("k-means with k = " + std::to_string(k) + " needs at least " +
                               std::to_string(k) + " distinct values, found " +
                               std::to_string(m));
  }

  WeightedPrefix pre;
  pre.shift = unique[m / 2];
  pre.w.assign(m + 1, 0.0);
  pre.s1.assign(m + 1, 0.0);
  pre.s2.assign(m + 1, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const double v = unique[i] - pre.shift;
    pre.w[i + 1] = pre.w[i] + weight[i];
    pre.s1[i + 1] = pre.s1[i] + weight[i] * v;
    pre.s2[i + 1] = pre.s2[i] + weight[i] * v * v;
  }

  // cost_rows[c][j]: optimal SSE of unique[0..j] split into c+1 clusters.
  std::vector<std::vector<double>> cost_rows(kk, std::vector<double>(m, 0.0));
  std::vector<std::vector<std::size_t>> args(kk, std::vector<std::size_t>(m, 0));
  for (std::size_t j = 0; j < m; ++j) cost_rows[0][j] = pre.cost(0, j);
  for (std::size_t c = 1; c < kk; ++c) {
    fill_row(pre, cost_rows[c - 1], cost_rows[c], args[c], c, m - 1, c, m - 1);
  }

  KMeans1D result;
  result.sse = cost_rows[kk - 1][m - 1];
  result.centers.resize(kk);
  result.upper.resize(kk);
  std::size_t end = m - 1;
  for (std::size_t c = kk; c-- > 0;) {
    const std::size_t start = c == 0 ? 0 : args[c][end];
    result.centers[c] = pre.mean(start, end);
    result.upper[c] = unique[end];
    if (c > 0) end = start - 1;
  }
  return result;
}

BinaryMask kmeans_temperature_segment(const ThermalRaster& raster, int k, bool daytime) {
  if (k < 2) throw ParameterError("temperature k-means needs k >= 2");
  std::vector<double> valid;
  valid.reserve(raster.size());
  for (std::size_t i = 0; i < raster.size(); ++i) {
    if (raster.is_valid(i)) valid.push_back(raster[i]);
  }
  const auto km = kmeans_1d_exact(valid, k);
  const std::size_t sound = daytime ? 0 : km.centers.size() - 1;
  BinaryMask mask(raster.width(), raster.height());
  for (std::size_t i = 0; i < raster.size(); ++i) {
    mask.set(i, raster.is_valid(i) && km.cluster_of(raster[i]) != sound);
  }
  return mask;
}

}  // namespace delamseg
