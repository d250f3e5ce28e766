#include "eigenscale/synth.hpp"

#include <chrono>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "csv.hpp"
#include "eigenscale/error.hpp"
#include "eigenscale/random.hpp"

namespace eigenscale {

void MarketModelSpec::validate() const {
  if (stocks < 1) throw config_error("synthetic market needs at least one stock");
  if (length < 2) throw config_error("synthetic market needs at least two days");
  if (sector_count < 1) throw config_error("synthetic market needs at least one sector");
  if (!(beta_market >= 0.0 && beta_market < 1.0) || !(beta_sector >= 0.0 && beta_sector < 1.0))
    throw config_error("factor loadings must lie in [0, 1)");
  if (beta_market * beta_market + beta_sector * beta_sector >= 1.0)
    throw config_error("beta_market^2 + beta_sector^2 must be below 1");
  if (!(daily_vol > 0.0) || !std::isfinite(daily_vol))
    throw config_error("daily volatility must be positive");
  if (sector_sizes.empty()) {
    if (stocks % sector_count != 0)
      throw config_error(
          fmt::format("{} stocks do not split evenly into {} sectors", stocks, sector_count));
  } else {
    if (sector_sizes.size() != sector_count)
      throw config_error("sector size list does not match the sector count");
    if (std::accumulate(sector_sizes.begin(), sector_sizes.end(), std::size_t{0}) != stocks)
      throw config_error("sector sizes do not sum to the stock count");
    for (std::size_t s : sector_sizes)
      if (s == 0) throw config_error("empty sector in sector size list");
  }
}

std::vector<std::size_t> MarketModelSpec::resolved_sector_sizes() const {
  if (!sector_sizes.empty()) return sector_sizes;
  return std::vector<std::size_t>(sector_count, stocks / sector_count);
}

double MarketModelSpec::idiosyncratic_scale() const {
  return std::sqrt(1.0 - beta_market * beta_market - beta_sector * beta_sector);
}

nlohmann::json MarketModelSpec::to_json() const {
  return {{"model", "market"},
          {"stocks", stocks},
          {"length", length},
          {"sector_count", sector_count},
          {"sector_sizes", resolved_sector_sizes()},
          {"beta_market", beta_market},
          {"beta_sector", beta_sector},
          {"idiosyncratic_scale", idiosyncratic_scale()},
          {"daily_vol", daily_vol},
          {"seed", seed}};
}

std::vector<std::string> business_dates(std::size_t count) {
  using namespace std::chrono;
  std::vector<std::string> out;
  out.reserve(count);
  sys_days day{year{2000} / January / 3};
  while (out.size() < count) {
    const weekday wd{day};
    if (wd != Saturday && wd != Sunday) {
      const year_month_day ymd{day};
      out.push_back(fmt::format("{:04}-{:02}-{:02}", static_cast<int>(ymd.year()),
                                static_cast<unsigned>(ymd.month()),
                                static_cast<unsigned>(ymd.day())));
    }
    day += days{1};
  }
  return out;
}

namespace {

ReturnPanel labelled_panel(std::size_t stocks, std::size_t length) {
  ReturnPanel p;
  p.returns = Matrix(stocks, length);
  const std::size_t width = std::to_string(stocks).size();
  for (std::size_t j = 0; j < stocks; ++j) p.tickers.push_back(fmt::format("S{:0{}}", j + 1, width));
  auto dates = business_dates(length + 1);
  p.dates.assign(dates.begin() + 1, dates.end());
  return p;
}

}  // namespace

SyntheticPanel generate_market(const MarketModelSpec& spec) {
  spec.validate();
  const std::size_t n = spec.stocks;
  const std::size_t len = spec.length;
  const auto sizes = spec.resolved_sector_sizes();

  SyntheticPanel out;
  out.panel = labelled_panel(n, len);
  // Draw order: market factor, sector factors in sector order, then stocks.
  Rng rng(derive_seed(spec.seed, {0x6d61726bULL}));
  out.market_factor.resize(len);
  for (double& f : out.market_factor) f = rng.normal();
  out.sector_factors.assign(spec.sector_count, std::vector<double>(len));
  for (auto& g : out.sector_factors)
    for (double& v : g) v = rng.normal();

  const double idio = spec.idiosyncratic_scale();
  std::size_t j = 0;
  for (std::size_t s = 0; s < sizes.size(); ++s) {
    const std::string label = fmt::format("SEC{}", s + 1);
    for (std::size_t k = 0; k < sizes[s]; ++k, ++j) {
      out.panel.sectors.push_back(label);
      auto r = out.panel.returns.row(j);
      for (std::size_t t = 0; t < len; ++t)
        r[t] = spec.daily_vol * (spec.beta_market * out.market_factor[t] +
                                 spec.beta_sector * out.sector_factors[s][t] + idio * rng.normal());
    }
  }
  return out;
}

ReturnPanel generate_noise(std::size_t stocks, std::size_t length, std::uint64_t seed) {
  if (length <= stocks) throw config_error("noise panel requires L > N");
  ReturnPanel p = labelled_panel(stocks, length);
  Rng rng(derive_seed(seed, {0x6e6f6973ULL}));
  for (double& v : p.returns.data()) v = rng.normal();
  p.sectors.assign(stocks, "ALL");
  return p;
}

SynthFiles write_synthetic(const std::filesystem::path& dir, const SyntheticPanel& synthetic,
                           const nlohmann::json& spec_json) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw io_error(fmt::format("cannot create '{}': {}", dir.string(), ec.message()));
  SynthFiles files{dir / "prices.csv", dir / "sectors.csv", dir / "synth.json"};
  const auto base = business_dates(1).front();
  write_price_csv(files.prices, cumulative_prices(synthetic.panel, base));
  write_sector_csv(files.sectors, synthetic.panel.tickers, synthetic.panel.sectors);
  nlohmann::json sidecar{{"spec", spec_json},
                         {"latent",
                          {{"market_factor", synthetic.market_factor},
                           {"sector_factors", synthetic.sector_factors}}}};
  csv::write_file(files.sidecar, sidecar.dump(2) + "\n");
  return files;
}

}  // namespace eigenscale
