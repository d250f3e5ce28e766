#include "eigenscale/ingest.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <set>
#include <unordered_map>

#include <fmt/format.h>

#include "csv.hpp"
#include "eigenscale/error.hpp"
#include "numeric.hpp"

namespace eigenscale {

namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

std::chrono::sys_days parse_iso_date(const std::string& text, std::size_t line) {
  int y = 0;
  unsigned m = 0, d = 0;
  auto bad = [&] { return data_error(fmt::format("invalid ISO date '{}' on line {}", text, line)); };
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') throw bad();
  auto field = [&](std::size_t pos, std::size_t len, auto& out) {
    auto [p, ec] = std::from_chars(text.data() + pos, text.data() + pos + len, out);
    if (ec != std::errc{} || p != text.data() + pos + len) throw bad();
  };
  field(0, 4, y);
  field(5, 2, m);
  field(8, 2, d);
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m},
                                        std::chrono::day{d}};
  if (!ymd.ok()) throw bad();
  return std::chrono::sys_days{ymd};
}

}  // namespace

ReturnPanel ReturnPanel::select(const std::vector<std::size_t>& rows) const {
  ReturnPanel out;
  out.dates = dates;
  out.returns = Matrix(rows.size(), length());
  out.tickers.reserve(rows.size());
  out.sectors.reserve(rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const std::size_t r = rows[k];
    out.tickers.push_back(tickers.at(r));
    out.sectors.push_back(sectors.at(r));
    auto src = returns.row(r);
    std::copy(src.begin(), src.end(), out.returns.row(k).begin());
  }
  return out;
}

std::vector<std::string> ReturnPanel::sector_labels() const {
  std::vector<std::string> labels;
  std::set<std::string> seen;
  for (const auto& s : sectors)
    if (seen.insert(s).second) labels.push_back(s);
  return labels;
}

LoadedPanel parse_price_panel(const std::string& prices_csv, const std::string& sectors_csv) {
  const auto records = csv::parse(prices_csv);
  if (records.empty()) throw data_error("price file is empty");

  const auto& header = records.front().fields;
  if (header.empty() || trim(header[0]) != "date")
    throw data_error("price header must start with 'date'");
  if (header.size() < 2) throw data_error("price file has no ticker columns");

  LoadedPanel out;
  auto& panel = out.prices;
  std::set<std::string> unique;
  for (std::size_t c = 1; c < header.size(); ++c) {
    std::string t = trim(header[c]);
    if (t.empty()) throw data_error(fmt::format("empty ticker name in column {}", c + 1));
    if (!unique.insert(t).second) throw data_error(fmt::format("duplicate ticker '{}'", t));
    panel.tickers.push_back(std::move(t));
  }

  const std::size_t n = panel.tickers.size();
  const std::size_t days = records.size() - 1;
  panel.prices = Matrix(n, days);
  std::optional<std::chrono::sys_days> previous;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.fields.size() != header.size())
      throw data_error(fmt::format("line {}: expected {} fields, found {}", rec.line,
                                   header.size(), rec.fields.size()));
    std::string date = trim(rec.fields[0]);
    const auto day = parse_iso_date(date, rec.line);
    if (previous && day <= *previous)
      throw data_error(fmt::format("non-increasing dates at line {} ('{}')", rec.line, date));
    previous = day;
    for (std::size_t c = 1; c < rec.fields.size(); ++c) {
      const std::string cell = trim(rec.fields[c]);
      const std::string& ticker = panel.tickers[c - 1];
      if (cell.empty())
        throw data_error(fmt::format("missing value at line {}, column {} ('{}', {})", rec.line,
                                     c + 1, ticker, date));
      double v = 0.0;
      auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc{} || p != cell.data() + cell.size())
        throw data_error(fmt::format("unparseable price '{}' at line {}, column {} ('{}')", cell,
                                     rec.line, c + 1, ticker));
      if (!(v > 0.0) || !std::isfinite(v))
        throw data_error(fmt::format("non-positive price {} at line {}, column {} ('{}')", cell,
                                     rec.line, c + 1, ticker));
      panel.prices(c - 1, r - 1) = v;
    }
    panel.dates.push_back(std::move(date));
  }

  const auto srecs = csv::parse(sectors_csv);
  if (srecs.empty() || srecs.front().fields.size() < 2 || trim(srecs.front().fields[0]) != "ticker" ||
      trim(srecs.front().fields[1]) != "sector")
    throw data_error("sector header must be 'ticker,sector'");
  for (std::size_t r = 1; r < srecs.size(); ++r) {
    const auto& rec = srecs[r];
    if (rec.fields.size() != 2)
      throw data_error(fmt::format("sector file line {}: expected 2 fields", rec.line));
    std::string t = trim(rec.fields[0]);
    std::string s = trim(rec.fields[1]);
    if (t.empty() || s.empty())
      throw data_error(fmt::format("sector file line {}: empty ticker or sector", rec.line));
    auto [it, inserted] = out.sectors.emplace(t, s);
    if (!inserted && it->second != s)
      throw data_error(fmt::format("ticker '{}' has conflicting sectors", t));
  }
  for (const auto& t : panel.tickers)
    if (!out.sectors.contains(t)) throw data_error(fmt::format("ticker '{}' has no sector", t));
  return out;
}

LoadedPanel load_price_panel(const std::filesystem::path& prices_path,
                             const std::filesystem::path& sectors_path) {
  return parse_price_panel(csv::read_file(prices_path), csv::read_file(sectors_path));
}

ReturnPanel log_returns(const PricePanel& panel, const SectorMap& sectors) {
  const std::size_t days = panel.prices.cols();
  if (days < 2) throw data_error("log returns need at least two days of prices");
  ReturnPanel out;
  out.tickers = panel.tickers;
  out.dates.assign(panel.dates.begin() + 1, panel.dates.end());
  out.returns = Matrix(panel.prices.rows(), days - 1);
  for (std::size_t j = 0; j < panel.prices.rows(); ++j) {
    auto p = panel.prices.row(j);
    auto r = out.returns.row(j);
    for (std::size_t t = 0; t + 1 < days; ++t) r[t] = std::log(p[t + 1]) - std::log(p[t]);
    auto it = sectors.find(panel.tickers[j]);
    if (it == sectors.end())
      throw data_error(fmt::format("ticker '{}' has no sector", panel.tickers[j]));
    out.sectors.push_back(it->second);
  }
  return out;
}

PricePanel cumulative_prices(const ReturnPanel& panel, const std::string& first_date,
                             double start) {
  PricePanel out;
  out.tickers = panel.tickers;
  out.dates.reserve(panel.length() + 1);
  out.dates.push_back(first_date);
  out.dates.insert(out.dates.end(), panel.dates.begin(), panel.dates.end());
  out.prices = Matrix(panel.stocks(), panel.length() + 1);
  const double log_start = std::log(start);
  for (std::size_t j = 0; j < panel.stocks(); ++j) {
    auto r = panel.returns.row(j);
    auto p = out.prices.row(j);
    double level = log_start;
    p[0] = start;
    for (std::size_t t = 0; t < r.size(); ++t) {
      level += r[t];
      p[t + 1] = std::exp(level);
    }
  }
  return out;
}

DescriptiveStats descriptive_stats(const ReturnPanel& panel) {
  const std::size_t len = panel.length();
  if (len < 4) throw data_error("descriptive statistics need at least 4 returns per stock");
  DescriptiveStats out;
  out.stocks.reserve(panel.stocks());
  const auto n = static_cast<double>(len);
  for (std::size_t j = 0; j < panel.stocks(); ++j) {
    auto x = panel.returns.row(j);
    StockMoments s;
    s.mean = detail::mean(x);
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : x) {
      const double d = v - s.mean;
      const double d2 = d * d;
      m2 += d2;
      m3 += d2 * d;
      m4 += d2 * d2;
    }
    s.zero_variance = detail::zero_variance(x, m2);
    s.stddev = std::sqrt(m2 / (n - 1.0));
    if (s.zero_variance) {
      s.skewness = std::numeric_limits<double>::quiet_NaN();
      s.kurtosis = std::numeric_limits<double>::quiet_NaN();
    } else {
      m2 /= n;
      m3 /= n;
      m4 /= n;
      s.skewness = m3 / std::pow(m2, 1.5);
      s.kurtosis = m4 / (m2 * m2);
    }
    out.stocks.push_back(s);
  }
  return out;
}

nlohmann::json FilterReport::to_json() const {
  nlohmann::json excluded_json = nlohmann::json::array();
  for (const auto& e : excluded) {
    nlohmann::json item{{"ticker", e.ticker}, {"reason", e.reason}};
    if (e.value) item["value"] = *e.value;
    excluded_json.push_back(std::move(item));
  }
  return {{"input_stocks", input_stocks},
          {"kept_stocks", kept_stocks},
          {"excluded", std::move(excluded_json)}};
}

FilteredUniverse filter_universe_report(const ReturnPanel& panel, const DescriptiveStats& stats,
                                        const UniverseFilter& filter) {
  if (filter.min_sector < 1) throw config_error("min_sector must be at least 1");
  if (stats.stocks.size() != panel.stocks())
    throw config_error("descriptive statistics do not match the panel");

  FilteredUniverse out;
  out.report.input_stocks = panel.stocks();
  std::vector<std::size_t> survivors;
  for (std::size_t j = 0; j < panel.stocks(); ++j) {
    const auto& s = stats.stocks[j];
    const std::string& t = panel.tickers[j];
    if (s.zero_variance) {
      out.report.excluded.push_back({t, "zero_variance", std::nullopt});
    } else if (std::abs(s.skewness) > filter.max_abs_skewness) {
      out.report.excluded.push_back({t, "skewness", s.skewness});
    } else if (s.kurtosis > filter.max_kurtosis) {
      out.report.excluded.push_back({t, "kurtosis", s.kurtosis});
    } else {
      survivors.push_back(j);
    }
  }

  std::unordered_map<std::string, std::size_t> counts;
  for (std::size_t j : survivors) ++counts[panel.sectors[j]];
  std::vector<std::size_t> kept;
  for (std::size_t j : survivors) {
    const std::size_t c = counts[panel.sectors[j]];
    if (c < filter.min_sector)
      out.report.excluded.push_back({panel.tickers[j], "small_sector", static_cast<double>(c)});
    else
      kept.push_back(j);
  }
  if (kept.empty()) throw data_error("universe empty after filters");
  out.report.kept_stocks = kept.size();
  out.panel = panel.select(kept);
  return out;
}

void write_price_csv(const std::filesystem::path& path, const PricePanel& panel) {
  std::string text = "date";
  for (const auto& t : panel.tickers) text += "," + csv::escape(t);
  text += "\n";
  for (std::size_t d = 0; d < panel.dates.size(); ++d) {
    text += panel.dates[d];
    for (std::size_t j = 0; j < panel.tickers.size(); ++j) {
      text += ",";
      text += csv::number(panel.prices(j, d));
    }
    text += "\n";
  }
  csv::write_file(path, text);
}

void write_sector_csv(const std::filesystem::path& path, const std::vector<std::string>& tickers,
                      const std::vector<std::string>& sectors) {
  std::string text = "ticker,sector\n";
  for (std::size_t j = 0; j < tickers.size(); ++j)
    text += csv::escape(tickers[j]) + "," + csv::escape(sectors[j]) + "\n";
  csv::write_file(path, text);
}

}  // namespace eigenscale
