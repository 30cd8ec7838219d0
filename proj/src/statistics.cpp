#include "craic/statistics.hpp"

#include "craic/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace craic::stats {

namespace {
void requireNonEmpty(const std::vector<double>& values) {
  if (values.empty()) throw Error(ErrorCode::EmptyCorpus, "statistic of an empty sample");
}
}  // namespace

double mean(const std::vector<double>& values) {
  requireNonEmpty(values);
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double median(std::vector<double> values) {
  requireNonEmpty(values);
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double nearestRank(std::vector<double> values, double p) {
  requireNonEmpty(values);
  std::sort(values.begin(), values.end());
  const auto n = static_cast<double>(values.size());
  auto rank = static_cast<std::size_t>(std::ceil(p * n));
  rank = std::clamp<std::size_t>(rank, 1, values.size());
  return values[rank - 1];
}

double sampleStdev(const std::vector<double>& values) {
  if (values.size() < 2) return 0.0;
  const double m = mean(values);
  double ss = 0;
  for (double v : values) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

}  // namespace craic::stats
