#include <catch_amalgamated.hpp>

#include <cmath>

#include "eigenscale/error.hpp"
#include "eigenscale/factors.hpp"
#include "eigenscale/synth.hpp"

using namespace eigenscale;
using Catch::Matchers::WithinAbs;

namespace {

MarketModelSpec thirteen_sectors() {
  MarketModelSpec spec;
  spec.sector_count = 13;
  spec.stocks = 130;
  spec.length = 600;
  return spec;
}

}  // namespace

TEST_CASE("equal_weighted emits market then sectors in order of appearance", "[factors]") {
  const auto panel = generate_market(thirteen_sectors()).panel;
  const auto ew = equal_weighted(panel);
  REQUIRE(ew.size() == 14);
  CHECK(ew[0].label == "EW:market");
  CHECK(ew[1].label == "EW:SEC1");
  CHECK(ew[13].label == "EW:SEC13");
  for (const auto& s : ew) CHECK(s.values.size() == panel.length());
}

TEST_CASE("equal_weighted on a hand-computed panel", "[factors]") {
  ReturnPanel p;
  p.returns = Matrix(3, 2);
  p.returns(0, 0) = 1; p.returns(0, 1) = 2;
  p.returns(1, 0) = 3; p.returns(1, 1) = 4;
  p.returns(2, 0) = 5; p.returns(2, 1) = 9;
  p.tickers = {"A", "B", "C"};
  p.sectors = {"y", "x", "y"};
  p.dates = business_dates(2);
  const auto ew = equal_weighted(p);
  REQUIRE(ew.size() == 3);
  CHECK(ew[0].values == std::vector<double>{3.0, 5.0});
  CHECK(ew[1].label == "EW:y");
  CHECK(ew[1].values == std::vector<double>{3.0, 5.5});
  CHECK(ew[2].label == "EW:x");
  CHECK(ew[2].values == std::vector<double>{3.0, 4.0});
}

TEST_CASE("market series is the size-weighted average of sector series", "[factors]") {
  MarketModelSpec spec;
  spec.stocks = 60;
  spec.sector_count = 3;
  spec.sector_sizes = {7, 41, 12};
  spec.length = 250;
  const auto panel = generate_market(spec).panel;
  const auto ew = equal_weighted(panel);
  for (std::size_t t = 0; t < panel.length(); ++t) {
    double weighted = 0.0;
    for (std::size_t s = 0; s < 3; ++s)
      weighted += static_cast<double>(spec.sector_sizes[s]) * ew[s + 1].values[t];
    CHECK_THAT(ew[0].values[t], WithinAbs(weighted / 60.0, 1e-12));
  }
}

TEST_CASE("factor scores are standardized and mutually uncorrelated", "[factors]") {
  const auto panel = generate_market(thirteen_sectors()).panel;
  const auto eig = eigh(correlation_matrix(panel));
  const auto f = factor_scores(panel, eig, 5);
  REQUIRE(f.size() == 5);
  CHECK(f[0].label == "F:1");
  const double len = static_cast<double>(panel.length());
  for (std::size_t a = 0; a < 5; ++a)
    for (std::size_t b = 0; b < 5; ++b) {
      double dot = 0.0, ma = 0.0, mb = 0.0;
      for (std::size_t t = 0; t < panel.length(); ++t) {
        ma += f[a].values[t];
        mb += f[b].values[t];
      }
      ma /= len;
      mb /= len;
      for (std::size_t t = 0; t < panel.length(); ++t)
        dot += (f[a].values[t] - ma) * (f[b].values[t] - mb);
      CHECK_THAT(dot / (len - 1.0), WithinAbs(a == b ? 1.0 : 0.0, 1e-9));
    }
  const auto ew = equal_weighted(panel);
  CHECK(pearson(f[0].values, ew[0].values) > 0.99);
}

TEST_CASE("factor scores survive positive per-stock rescaling", "[factors][property]") {
  const auto base = generate_market(thirteen_sectors()).panel;
  auto scaled = base;
  for (std::size_t j = 0; j < scaled.stocks(); ++j)
    for (double& v : scaled.returns.row(j)) v = v * (0.1 + 0.37 * static_cast<double>(j % 7)) + 0.02;
  const auto a = factor_scores(base, 3);
  const auto b = factor_scores(scaled, 3);
  for (std::size_t k = 0; k < 3; ++k)
    CHECK_THAT(std::abs(pearson(a[k].values, b[k].values)), WithinAbs(1.0, 1e-9));
  // the market factor is not degenerate, so even its sign is stable
  CHECK(pearson(a[0].values, b[0].values) > 0.0);
}

TEST_CASE("factor_scores argument checks", "[factors]") {
  const auto panel = generate_noise(6, 50, 3);
  const auto eig = eigh(correlation_matrix(panel));
  CHECK_THROWS_AS(factor_scores(panel, eig, 0), Error);
  CHECK_THROWS_AS(factor_scores(panel, eig, 7), Error);

  EigenSystem flat = eig;
  flat.values[1] = 0.0;
  try {
    factor_scores(panel, flat, 2);
    FAIL("expected a numerical error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::numerical);
    CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring("degenerate factor"));
  }
}
