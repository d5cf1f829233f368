#pragma once

#include <cstddef>
#include <span>

namespace skinspec {

// Box-plot ready summary. Quantiles interpolate linearly between order
// statistics at position (n - 1) * p. Whiskers are q1 - 1.5 IQR and
// q3 + 1.5 IQR, clamped to [min, max].
struct Summary {
  std::size_t count = 0;
  double mean = 0.0;
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  double whisker_low = 0.0;
  double whisker_high = 0.0;

  friend bool operator==(const Summary&, const Summary&) = default;
};

// Throws ValidationError on empty or non-finite input.
Summary summarize(std::span<const double> values);

// Linear-interpolation quantile of already sorted data, p in [0, 1].
double sorted_quantile(std::span<const double> sorted, double p);

}  // namespace skinspec
