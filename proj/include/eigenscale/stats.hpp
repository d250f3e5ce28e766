#pragma once

#include <cstddef>
#include <span>

#include <json.hpp>

namespace eigenscale {

/// Mean and sample standard deviation (divisor n-1). With n < 2 the standard
/// deviation is NaN and `std_defined` is false.
struct StatSummary {
  double mean = 0.0;
  double stddev = 0.0;
  std::size_t n = 0;
  bool std_defined = false;
};

StatSummary summarize(std::span<const double> values);

/// Five-number summary; quartiles by linear interpolation between order
/// statistics (Hyndman-Fan type 7).
struct BoxStats {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
};

BoxStats box_stats(std::span<const double> values);

/// Type-7 quantile of an ascending-sorted sample, p in [0, 1].
double sorted_quantile(std::span<const double> sorted, double p);

nlohmann::json to_json(const StatSummary& s);
nlohmann::json to_json(const BoxStats& b);

}  // namespace eigenscale
