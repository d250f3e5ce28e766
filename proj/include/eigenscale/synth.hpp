#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include <json.hpp>

#include "eigenscale/ingest.hpp"

namespace eigenscale {

/// One market factor plus one factor per sector:
///   r(j,t) = daily_vol * (beta_market f(t) + beta_sector g(s(j),t) + idio e(j,t))
/// with idio = sqrt(1 - beta_market^2 - beta_sector^2), so each stock has
/// population variance daily_vol^2.
struct MarketModelSpec {
  std::size_t stocks = 360;
  std::size_t length = 2000;
  std::size_t sector_count = 5;
  std::vector<std::size_t> sector_sizes;  // empty: equal split
  double beta_market = 0.55;
  double beta_sector = 0.4;
  double daily_vol = 1.0;
  std::uint64_t seed = 20100101;

  /// Throws Error(config) on an invalid spec.
  void validate() const;
  std::vector<std::size_t> resolved_sector_sizes() const;
  double idiosyncratic_scale() const;

  nlohmann::json to_json() const;
};

struct SyntheticPanel {
  ReturnPanel panel;
  std::vector<double> market_factor;               // f(t)
  std::vector<std::vector<double>> sector_factors;  // g(s, t)
};

SyntheticPanel generate_market(const MarketModelSpec& spec);

/// IID standard-normal panel in a single sector. Throws Error(config) unless
/// L > N.
ReturnPanel generate_noise(std::size_t stocks, std::size_t length, std::uint64_t seed);

/// Business-day ISO dates starting at 2000-01-03.
std::vector<std::string> business_dates(std::size_t count);

struct SynthFiles {
  std::filesystem::path prices;
  std::filesystem::path sectors;
  std::filesystem::path sidecar;
};

/// Writes prices.csv, sectors.csv and synth.json (spec, seed, latent factors)
/// into `dir`.
SynthFiles write_synthetic(const std::filesystem::path& dir, const SyntheticPanel& synthetic,
                           const nlohmann::json& spec_json);

}  // namespace eigenscale
