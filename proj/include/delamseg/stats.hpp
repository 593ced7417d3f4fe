#pragma once

#include <span>
#include <vector>

namespace delamseg {

double mean(std::span<const double> values);
/// Population standard deviation (divides by N).
double stddev(std::span<const double> values);

/// Linear interpolation between order statistics: rank = p/100 * (n-1).
/// p in [0, 100].
double percentile_linear(std::vector<double> values, double p);

}  // namespace delamseg
