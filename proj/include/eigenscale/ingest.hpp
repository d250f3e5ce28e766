#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "eigenscale/matrix.hpp"

namespace eigenscale {

/// Complete daily price panel, one row per ticker.
struct PricePanel {
  std::vector<std::string> tickers;
  std::vector<std::string> dates;  // ISO-8601, strictly increasing
  Matrix prices;                   // tickers x dates, all > 0
};

using SectorMap = std::map<std::string, std::string>;

/// Log-return panel. `dates[t]` is the day the return t was realised.
struct ReturnPanel {
  std::vector<std::string> tickers;
  std::vector<std::string> dates;
  Matrix returns;                    // stocks x L
  std::vector<std::string> sectors;  // aligned with tickers

  std::size_t stocks() const noexcept { return returns.rows(); }
  std::size_t length() const noexcept { return returns.cols(); }

  /// Sub-panel of the given rows, in the given order.
  ReturnPanel select(const std::vector<std::size_t>& rows) const;

  /// Distinct sector labels in order of first appearance.
  std::vector<std::string> sector_labels() const;
};

struct LoadedPanel {
  PricePanel prices;
  SectorMap sectors;
};

/// Reads a wide price CSV (`date,<ticker>,...`) and a `ticker,sector` CSV.
/// Throws Error(io) for unreadable files and Error(data) for any validation
/// failure, naming the offending row/column.
LoadedPanel load_price_panel(const std::filesystem::path& prices_path,
                             const std::filesystem::path& sectors_path);

/// Same checks as load_price_panel, on in-memory CSV text.
LoadedPanel parse_price_panel(const std::string& prices_csv, const std::string& sectors_csv);

ReturnPanel log_returns(const PricePanel& panel, const SectorMap& sectors);

/// Inverse of log_returns: prices[t] = start * exp(sum of returns up to t).
/// `first_date` labels the base day preceding the first return.
PricePanel cumulative_prices(const ReturnPanel& panel, const std::string& first_date,
                             double start = 100.0);

struct StockMoments {
  double mean = 0.0;
  double stddev = 0.0;    // sample, divisor L-1
  double skewness = 0.0;  // m3 / m2^(3/2)
  double kurtosis = 0.0;  // Pearson, m4 / m2^2 (normal = 3)
  bool zero_variance = false;
};

struct DescriptiveStats {
  std::vector<StockMoments> stocks;  // aligned with panel rows
};

DescriptiveStats descriptive_stats(const ReturnPanel& panel);

struct UniverseFilter {
  double max_abs_skewness = 2.0;
  double max_kurtosis = 30.0;
  std::size_t min_sector = 5;  // sectors with fewer survivors are dropped
};

struct Exclusion {
  std::string ticker;
  std::string reason;  // zero_variance | skewness | kurtosis | small_sector
  std::optional<double> value;
};

struct FilterReport {
  std::size_t input_stocks = 0;
  std::size_t kept_stocks = 0;
  std::vector<Exclusion> excluded;

  nlohmann::json to_json() const;
};

struct FilteredUniverse {
  ReturnPanel panel;
  FilterReport report;
};

FilteredUniverse filter_universe_report(const ReturnPanel& panel, const DescriptiveStats& stats,
                                        const UniverseFilter& filter);

inline ReturnPanel filter_universe(const ReturnPanel& panel, const DescriptiveStats& stats,
                                   std::size_t min_sector) {
  return filter_universe_report(panel, stats, UniverseFilter{.min_sector = min_sector}).panel;
}

/// Writers for the interchange formats read by load_price_panel.
void write_price_csv(const std::filesystem::path& path, const PricePanel& panel);
void write_sector_csv(const std::filesystem::path& path, const std::vector<std::string>& tickers,
                      const std::vector<std::string>& sectors);

}  // namespace eigenscale
