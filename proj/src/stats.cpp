#include "eigenscale/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "eigenscale/error.hpp"

namespace eigenscale {

StatSummary summarize(std::span<const double> values) {
  StatSummary s;
  s.n = values.size();
  if (s.n == 0) {
    s.mean = std::numeric_limits<double>::quiet_NaN();
    s.stddev = std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(s.n);
  if (s.n < 2) {
    s.stddev = std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.stddev = std::sqrt(ss / static_cast<double>(s.n - 1));
  s.std_defined = true;
  return s;
}

double sorted_quantile(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw config_error("quantile of an empty sample");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

BoxStats box_stats(std::span<const double> values) {
  if (values.empty()) throw config_error("box statistics of an empty sample");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  return {v.front(), sorted_quantile(v, 0.25), sorted_quantile(v, 0.5), sorted_quantile(v, 0.75),
          v.back()};
}

namespace {
nlohmann::json number_or_null(double x) {
  return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr);
}
}  // namespace

nlohmann::json to_json(const StatSummary& s) {
  return {{"mean", number_or_null(s.mean)},
          {"std", number_or_null(s.stddev)},
          {"n", s.n},
          {"std_defined", s.std_defined}};
}

nlohmann::json to_json(const BoxStats& b) {
  return {{"min", b.min}, {"q1", b.q1}, {"median", b.median}, {"q3", b.q3}, {"max", b.max}};
}

}  // namespace eigenscale
