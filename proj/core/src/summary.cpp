#include "skinspec/summary.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "skinspec/error.hpp"

namespace skinspec {

double sorted_quantile(std::span<const double> sorted, double p) {
  if (sorted.empty()) fail_validation("quantile of an empty list");
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  if (frac == 0.0) return sorted[lo];
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

Summary summarize(std::span<const double> values) {
  if (values.empty()) fail_validation("cannot summarize an empty list");
  std::vector<double> v(values.begin(), values.end());
  double sum = 0.0;
  for (double x : v) {
    if (!std::isfinite(x)) fail_validation("cannot summarize non-finite values");
    sum += x;
  }
  std::sort(v.begin(), v.end());
  Summary s;
  s.count = v.size();
  s.mean = sum / static_cast<double>(v.size());
  s.min = v.front();
  s.max = v.back();
  s.q1 = sorted_quantile(v, 0.25);
  s.median = sorted_quantile(v, 0.5);
  s.q3 = sorted_quantile(v, 0.75);
  const double iqr = s.q3 - s.q1;
  s.whisker_low = std::max(s.min, s.q1 - 1.5 * iqr);
  s.whisker_high = std::min(s.max, s.q3 + 1.5 * iqr);
  return s;
}

}  // namespace skinspec
