#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "eigenscale/factors.hpp"
#include "eigenscale/rmt.hpp"
#include "eigenscale/stats.hpp"

namespace eigenscale {

struct SubsetSchedule {
  std::vector<std::size_t> sizes;  // strictly increasing
  std::size_t iterations = 100;
  std::uint64_t seed = 0;

  /// min, min+step, ... up to and including max when it lies on the grid.
  static SubsetSchedule arithmetic(std::size_t min_size, std::size_t step, std::size_t max_size,
                                   std::size_t iterations, std::uint64_t seed);

  /// Throws Error(config) unless sizes are strictly increasing, non-zero,
  /// within `universe`, and iterations >= min_iterations.
  void validate(std::size_t universe, std::size_t min_iterations = 2) const;

  nlohmann::json to_json() const;
  std::string describe() const;  // "50:10:200x100" style echo
};

struct SubsetSample {
  std::size_t size = 0;
  std::size_t iteration = 0;
  std::vector<std::size_t> indices;  // sorted, distinct
};

/// C(n, k), saturating at UINT64_MAX.
std::uint64_t binomial(std::size_t n, std::size_t k);

/// One list of `iterations` distinct subsets per schedule size. Each draw is
/// a function of (seed, size, iteration, attempt) only; a draw equal to an
/// earlier iteration of the same size is rejected and redrawn.
/// Throws Error(config) if C(N, M) < iterations for some size.
std::vector<std::vector<SubsetSample>> sample_subsets(std::size_t universe,
                                                      const SubsetSchedule& schedule);

/// Spectrum and leading eigenmodes of one subset.
struct SubsetAnalysis {
  SubsetSample sample;
  std::vector<double> eigenvalues;  // descending, full spectrum
  MPBounds bounds;                  // at Q = L / M
  std::size_t deviating = 0;        // K for this subset
  Matrix modes;  // row r = rank r+1 eigenmode, zero mean and unit norm
};

/// All subsets of a schedule analysed once, shared by the experiments.
struct Ensemble {
  SubsetSchedule schedule;
  std::size_t universe = 0;
  std::size_t length = 0;
  std::size_t mode_ranks = 0;
  std::vector<std::vector<SubsetAnalysis>> by_size;  // [size index][iteration]
};

/// Iterations are independent work units; `ex` only changes who runs them.
Ensemble analyze_ensemble(const ReturnPanel& panel, const SubsetSchedule& schedule,
                          std::size_t mode_ranks, Execution ex = Execution::parallel);

struct ScalingRow {
  std::size_t size = 0;
  std::size_t rank = 0;  // 1-based
  StatSummary summary;   // over iterations where this rank deviates
};

struct ScalingResult {
  std::vector<ScalingRow> rows;           // ordered by size then rank
  std::vector<StatSummary> deviating_count;  // per size, K over iterations
};

ScalingResult eigenvalue_scaling(const Ensemble& ensemble);
ScalingResult eigenvalue_scaling(const ReturnPanel& panel, const SubsetSchedule& schedule,
                                 Execution ex = Execution::parallel);

/// Correlation statistics for one group of rank-matched mode pairs.
struct PairStats {
  std::size_t size_a = 0;
  std::size_t size_b = 0;
  StatSummary signed_rho;
  StatSummary abs_rho;
  /// Fraction of subsets in the group whose K is below the rank.
  double below_k_fraction = 0.0;
};

struct RhoResult {
  std::size_t rank = 0;
  std::vector<PairStats> groups;  // between: one per size pair; within: one per size
  BoxStats mean_box;              // over group means (signed)
  BoxStats std_box;               // over group standard deviations (signed)
  BoxStats abs_mean_box;
  BoxStats abs_std_box;
  std::size_t correlations_per_group = 0;  // at uniform iteration counts
};

/// rho^B: every pair of distinct sizes, all iterations x iterations.
RhoResult rho_between(const Ensemble& ensemble, std::size_t rank,
                      Execution ex = Execution::parallel);
RhoResult rho_between(const ReturnPanel& panel, const SubsetSchedule& schedule, std::size_t rank,
                      Execution ex = Execution::parallel);

/// rho^W: within each size, all C(iterations, 2) pairs.
RhoResult rho_within(const Ensemble& ensemble, std::size_t rank,
                     Execution ex = Execution::parallel);
RhoResult rho_within(const ReturnPanel& panel, const SubsetSchedule& schedule, std::size_t rank,
                     Execution ex = Execution::parallel);

inline constexpr double kBenchmarkCorrelation = 0.15;

struct ModeMeaning {
  std::size_t rank = 0;
  double eigenvalue = 0.0;
  bool deviating = false;
  ProfileEntry equal_weighted;
  ProfileEntry factor;
  bool ew_above_benchmark = false;
  bool factor_above_benchmark = false;
};

struct EconomicMeaning {
  MPBounds bounds;
  std::size_t deviating = 0;
  std::size_t factor_count = 0;
  double benchmark = kBenchmarkCorrelation;
  std::vector<ModeMeaning> modes;
};

/// Max correlation of every mode of the full panel against the
/// equal-weighted series and against K factor scores (K = deviating count,
/// at least 1).
EconomicMeaning economic_meaning(const ReturnPanel& panel, Execution ex = Execution::parallel);

nlohmann::json to_json(const ScalingResult& r);
nlohmann::json to_json(const RhoResult& r);
nlohmann::json to_json(const EconomicMeaning& r);

}  // namespace eigenscale
