#include "eigenscale/modes.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "csv.hpp"
#include "eigenscale/error.hpp"
#include "numeric.hpp"

namespace eigenscale {

EigenmodeSeries eigenmode(const ReturnPanel& panel, const EigenSystem& eig, std::size_t rank,
                          std::string source) {
  if (eig.size() != panel.stocks())
    throw config_error("eigensystem does not belong to this panel");
  if (rank < 1 || rank > eig.size())
    throw config_error(fmt::format("mode rank {} outside 1..{}", rank, eig.size()));
  const Matrix z = standardize_rows(panel);
  EigenmodeSeries out{rank, std::vector<double>(panel.length(), 0.0), std::move(source)};
  for (std::size_t j = 0; j < z.rows(); ++j) {
    const double w = eig.vectors(j, rank - 1);
    auto src = z.row(j);
    for (std::size_t t = 0; t < out.values.size(); ++t) out.values[t] += w * src[t];
  }
  return out;
}

Matrix all_eigenmodes(const ReturnPanel& panel, const EigenSystem& eig, Execution ex) {
  if (eig.size() != panel.stocks())
    throw config_error("eigensystem does not belong to this panel");
  return kernels::project(eig.vectors, eig.size(), standardize_rows(panel), ex);
}

double pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw data_error(fmt::format("pearson: lengths differ ({} vs {})", a.size(), b.size()));
  if (a.size() < 2) throw data_error("pearson needs at least two observations");
  const double ma = detail::mean(a);
  const double mb = detail::mean(b);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t) {
    const double da = a[t] - ma;
    const double db = b[t] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (detail::zero_variance(a, saa) || detail::zero_variance(b, sbb))
    throw data_error("pearson: zero-variance series");
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

std::vector<double> normalized(std::span<const double> series) {
  const double m = detail::mean(series);
  const double ss = detail::centered_ss(series, m);
  if (detail::zero_variance(series, ss)) throw data_error("cannot normalize a constant series");
  const double inv = 1.0 / std::sqrt(ss);
  std::vector<double> out(series.size());
  for (std::size_t t = 0; t < series.size(); ++t) out[t] = (series[t] - m) * inv;
  return out;
}

std::vector<ProfileEntry> max_corr_profile(const Matrix& modes,
                                           const std::vector<LabeledSeries>& references) {
  if (references.empty()) throw config_error("max_corr_profile needs at least one reference");
  std::vector<ProfileEntry> out;
  out.reserve(modes.rows());
  for (std::size_t i = 0; i < modes.rows(); ++i) {
    ProfileEntry e;
    e.rank = i + 1;
    e.max_abs = -1.0;
    for (const auto& ref : references) {
      const double rho = pearson(modes.row(i), ref.values);
      if (std::abs(rho) > e.max_abs) {
        e.max_abs = std::abs(rho);
        e.signed_at_max = rho;
        e.reference = ref.label;
      }
    }
    out.push_back(std::move(e));
  }
  return out;
}

void write_series_csv(const std::string& path, std::span<const double> values) {
  std::string text = "t,value\n";
  for (std::size_t t = 0; t < values.size(); ++t)
    text += fmt::format("{},{}\n", t, csv::number(values[t]));
  csv::write_file(path, text);
}

}  // namespace eigenscale
