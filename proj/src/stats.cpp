#include "delamseg/stats.hpp"

#include <algorithm>
#include <cmath>

#include "delamseg/error.hpp"

namespace delamseg {

double mean(std::span<const double> values) {
  if (values.empty()) throw PreconditionError("mean of an empty set");
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double stddev(std::span<const double> values) {
  const double m = mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(values.size()));
}

double percentile_linear(std::vector<double> values, double p) {
  if (values.empty()) throw PreconditionError("percentile of an empty set");
  if (!(p >= 0.0 && p <= 100.0)) throw ParameterError("percentile must lie in [0, 100]");
  std::sort(values.begin(), values.end());
  const double rank = p / 100.0 * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = rank - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

}  // namespace delamseg
