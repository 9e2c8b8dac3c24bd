#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

namespace renyi::detail {

/// log sum_i exp(x_i); -inf for an empty range.
inline double log_sum_exp(std::span<const double> xs) {
  if (xs.empty()) return -std::numeric_limits<double>::infinity();
  double m = *std::max_element(xs.begin(), xs.end());
  if (std::isinf(m)) return m;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

}  // namespace renyi::detail
