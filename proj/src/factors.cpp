#include "eigenscale/factors.hpp"

#include <cmath>

#include <fmt/format.h>

#include "csv.hpp"
#include "eigenscale/error.hpp"

namespace eigenscale {

std::vector<ReferenceSeries> equal_weighted(const ReturnPanel& panel) {
  if (panel.stocks() == 0) throw data_error("equal-weighted returns of an empty panel");
  const std::size_t len = panel.length();
  const auto labels = panel.sector_labels();

  std::vector<ReferenceSeries> out;
  out.reserve(labels.size() + 1);
  auto average = [&](std::string label, auto&& include) {
    ReferenceSeries s{std::move(label), std::vector<double>(len, 0.0)};
    std::size_t count = 0;
    for (std::size_t j = 0; j < panel.stocks(); ++j) {
      if (!include(j)) continue;
      ++count;
      auto r = panel.returns.row(j);
      for (std::size_t t = 0; t < len; ++t) s.values[t] += r[t];
    }
    for (double& v : s.values) v /= static_cast<double>(count);
    out.push_back(std::move(s));
  };
  average("EW:market", [](std::size_t) { return true; });
  for (const auto& sector : labels)
    average("EW:" + sector, [&](std::size_t j) { return panel.sectors[j] == sector; });
  return out;
}

std::vector<ReferenceSeries> factor_scores(const ReturnPanel& panel, const EigenSystem& eig,
                                           std::size_t k) {
  if (k < 1 || k > eig.size())
    throw config_error(fmt::format("factor count {} outside 1..{}", k, eig.size()));
  for (std::size_t p = 0; p < k; ++p)
    if (eig.values[p] <= 1e-12)
      throw numerical_error(fmt::format("degenerate factor {} (eigenvalue {:.3e})", p + 1,
                                        eig.values[p]));
  const Matrix scores = kernels::serial::project(eig.vectors, k, standardize_rows(panel));
  std::vector<ReferenceSeries> out;
  out.reserve(k);
  for (std::size_t p = 0; p < k; ++p) {
    auto row = scores.row(p);
    const double inv = 1.0 / std::sqrt(eig.values[p]);
    ReferenceSeries s{fmt::format("F:{}", p + 1), std::vector<double>(row.begin(), row.end())};
    for (double& v : s.values) v *= inv;
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<ReferenceSeries> factor_scores(const ReturnPanel& panel, std::size_t k) {
  return factor_scores(panel, eigh(correlation_matrix(panel)), k);
}

void write_reference_csv(const std::string& path, const std::vector<ReferenceSeries>& series) {
  std::string text = "t";
  for (const auto& s : series) text += "," + csv::escape(s.label);
  text += '\n';
  const std::size_t len = series.empty() ? 0 : series.front().values.size();
  for (std::size_t t = 0; t < len; ++t) {
    text += std::to_string(t);
    for (const auto& s : series) text += "," + csv::number(s.values[t]);
    text += '\n';
  }
  csv::write_file(path, text);
}

}  // namespace eigenscale
