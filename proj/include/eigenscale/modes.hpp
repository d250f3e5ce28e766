#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "eigenscale/spectra.hpp"

namespace eigenscale {

/// Projection of the standardized return cross-section on one eigenvector.
struct EigenmodeSeries {
  std::size_t rank = 0;  // 1-based, by descending eigenvalue
  std::vector<double> values;
  std::string source;
};

/// Mode `rank` (1-based) of `panel`, whose correlation matrix produced `eig`.
/// Rows are standardized before projection, so the sample variance of the
/// result equals the eigenvalue. Throws Error(config) if rank is out of range.
EigenmodeSeries eigenmode(const ReturnPanel& panel, const EigenSystem& eig, std::size_t rank,
                          std::string source = "panel");

/// All M modes at once, row k = rank k+1.
Matrix all_eigenmodes(const ReturnPanel& panel, const EigenSystem& eig,
                      Execution ex = Execution::serial);

/// Pearson correlation. Throws Error(data) for length mismatch, fewer than
/// two points or a zero-variance argument.
double pearson(std::span<const double> a, std::span<const double> b);

/// Scales a series to zero mean and unit Euclidean norm so that the dot
/// product of two normalized series is their Pearson correlation.
std::vector<double> normalized(std::span<const double> series);

struct LabeledSeries {
  std::string label;
  std::vector<double> values;
};

struct ProfileEntry {
  std::size_t rank = 0;
  double max_abs = 0.0;  // max over references of |rho|
  double signed_at_max = 0.0;
  std::string reference;
};

/// For every mode row, the reference with the largest |Pearson correlation|.
/// Throws Error(config) if `references` is empty.
std::vector<ProfileEntry> max_corr_profile(const Matrix& modes,
                                           const std::vector<LabeledSeries>& references);

void write_series_csv(const std::string& path, std::span<const double> values);

}  // namespace eigenscale
