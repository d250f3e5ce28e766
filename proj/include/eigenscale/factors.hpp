#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "eigenscale/modes.hpp"

namespace eigenscale {

using ReferenceSeries = LabeledSeries;

/// `EW:market` (average of all stocks) followed by one `EW:<sector>` series
/// per sector in order of first appearance.
std::vector<ReferenceSeries> equal_weighted(const ReturnPanel& panel);

/// Principal-component factor scores `F:1..F:K`: standardized panel projected
/// on eigenvector p and divided by sqrt(lambda_p). Each has unit sample
/// variance and the scores are mutually uncorrelated.
/// Throws Error(config) unless 1 <= K <= M and Error(numerical) "degenerate
/// factor" when lambda_p <= 1e-12.
std::vector<ReferenceSeries> factor_scores(const ReturnPanel& panel, const EigenSystem& eig,
                                           std::size_t k);
std::vector<ReferenceSeries> factor_scores(const ReturnPanel& panel, std::size_t k);

void write_reference_csv(const std::string& path, const std::vector<ReferenceSeries>& series);

}  // namespace eigenscale
