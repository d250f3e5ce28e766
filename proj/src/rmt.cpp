#include "eigenscale/rmt.hpp"

#include <cmath>
#include <numbers>

#include "eigenscale/error.hpp"

namespace eigenscale {

MPBounds mp_bounds(std::size_t length, std::size_t count) {
  if (count < 1 || length <= count) throw data_error("MP bounds require L > N");
  MPBounds b;
  b.q = static_cast<double>(length) / static_cast<double>(count);
  const double inv_q = 1.0 / b.q;
  const double spread = 2.0 * std::sqrt(inv_q);
  b.lambda_plus = 1.0 + inv_q + spread;
  b.lambda_minus = 1.0 + inv_q - spread;
  return b;
}

double mp_density(double lambda, const MPBounds& bounds) {
  if (!(lambda > bounds.lambda_minus && lambda < bounds.lambda_plus) || lambda <= 0.0) return 0.0;
  const double root = std::sqrt((bounds.lambda_plus - lambda) * (lambda - bounds.lambda_minus));
  return bounds.q / (2.0 * std::numbers::pi) * root / lambda;
}

std::size_t deviating_count(const std::vector<double>& descending, const MPBounds& bounds) {
  std::size_t k = 0;
  while (k < descending.size() && descending[k] > bounds.lambda_plus) ++k;
  return k;
}

DeviatingSet deviating(const EigenSystem& eig, const MPBounds& bounds) {
  DeviatingSet out;
  const std::size_t k = deviating_count(eig.values, bounds);
  for (std::size_t i = 0; i < k; ++i) {
    out.indices.push_back(i);
    out.values.push_back(eig.values[i]);
  }
  return out;
}

}  // namespace eigenscale
