#pragma once

#include <cstddef>
#include <vector>

#include "eigenscale/spectra.hpp"

namespace eigenscale {

/// Marchenko-Pastur support for a random correlation matrix of N series of
/// length L.
struct MPBounds {
  double q = 0.0;  // L / N
  double lambda_minus = 0.0;
  double lambda_plus = 0.0;
};

/// Throws Error(data) "MP bounds require L > N" unless L > N >= 1.
MPBounds mp_bounds(std::size_t length, std::size_t count);

/// (Q / 2 pi) sqrt((l+ - x)(x - l-)) / x inside the open support, 0 elsewhere.
double mp_density(double lambda, const MPBounds& bounds);

struct DeviatingSet {
  std::vector<std::size_t> indices;  // 0-based ranks into EigenSystem::values
  std::vector<double> values;        // descending

  std::size_t count() const noexcept { return values.size(); }
};

/// Eigenvalues strictly above lambda_plus.
DeviatingSet deviating(const EigenSystem& eig, const MPBounds& bounds);
std::size_t deviating_count(const std::vector<double>& descending, const MPBounds& bounds);

}  // namespace eigenscale
