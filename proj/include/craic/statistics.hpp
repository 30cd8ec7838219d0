#pragma once

#include <vector>

namespace craic::stats {

double mean(const std::vector<double>& values);

/// Middle element, or the average of the two middle elements.
double median(std::vector<double> values);

/// Nearest-rank percentile: sorted[ceil(p * n) - 1], with p in (0, 1].
double nearestRank(std::vector<double> values, double p);

/// Sample (n - 1) standard deviation; 0 for fewer than two values.
double sampleStdev(const std::vector<double>& values);

}  // namespace craic::stats
