#pragma once

#include <algorithm>
#include <cmath>
#include <span>

namespace eigenscale::detail {

inline double mean(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

/// Sum of squared deviations from the mean.
inline double centered_ss(std::span<const double> x, double m) {
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return ss;
}

/// True when a series is constant up to round-off of its own magnitude.
inline bool zero_variance(std::span<const double> x, double ss) {
  double scale = 0.0;
  for (double v : x) scale = std::max(scale, std::abs(v));
  const double tiny = 1e-12 * scale;
  return ss <= static_cast<double>(x.size()) * tiny * tiny;
}

}  // namespace eigenscale::detail
