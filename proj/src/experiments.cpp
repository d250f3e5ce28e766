#include "eigenscale/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include <fmt/format.h>

#include "eigenscale/error.hpp"
#include "eigenscale/random.hpp"

namespace eigenscale {

SubsetSchedule SubsetSchedule::arithmetic(std::size_t min_size, std::size_t step,
                                          std::size_t max_size, std::size_t iterations,
                                          std::uint64_t seed) {
  if (min_size < 1) throw config_error("minimum subset size must be at least 1");
  if (step < 1) throw config_error("subset size step must be at least 1");
  if (max_size < min_size)
    throw config_error(fmt::format("max size {} below min size {}", max_size, min_size));
  SubsetSchedule s;
  for (std::size_t m = min_size; m <= max_size; m += step) s.sizes.push_back(m);
  s.iterations = iterations;
  s.seed = seed;
  return s;
}

void SubsetSchedule::validate(std::size_t universe, std::size_t min_iterations) const {
  if (sizes.empty()) throw config_error("schedule has no subset sizes");
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] == 0) throw config_error("subset sizes must be positive");
    if (i > 0 && sizes[i] <= sizes[i - 1])
      throw config_error("subset sizes must be strictly increasing");
  }
  if (sizes.back() > universe)
    throw config_error(
        fmt::format("largest subset size {} exceeds universe of {} stocks", sizes.back(), universe));
  if (iterations < min_iterations)
    throw config_error(fmt::format("at least {} iterations required", min_iterations));
}

nlohmann::json SubsetSchedule::to_json() const {
  return {{"sizes", sizes}, {"iterations", iterations}, {"seed", seed}};
}

std::string SubsetSchedule::describe() const {
  std::string s;
  for (std::size_t i = 0; i < sizes.size(); ++i) s += (i ? " " : "") + std::to_string(sizes[i]);
  return fmt::format("sizes=[{}] iterations={} seed={}", s, iterations, seed);
}

std::uint64_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  constexpr auto cap = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    // r * (n - k + i) / i stays integral at every step.
    const std::uint64_t num = n - k + i;
    const std::uint64_t g = std::gcd(r, static_cast<std::uint64_t>(i));
    const std::uint64_t r_reduced = r / g;
    const std::uint64_t num_reduced = num / (i / g);
    if (r_reduced > cap / num_reduced) return cap;
    r = r_reduced * num_reduced;
  }
  return r;
}

std::vector<std::vector<SubsetSample>> sample_subsets(std::size_t universe,
                                                      const SubsetSchedule& schedule) {
  schedule.validate(universe, 1);
  for (std::size_t m : schedule.sizes)
    if (binomial(universe, m) < schedule.iterations)
      throw config_error(fmt::format("only {} distinct subsets of size {} from {} stocks, {} requested",
                                     binomial(universe, m), m, universe, schedule.iterations));

  constexpr std::uint64_t max_attempts = 1'000'000;
  std::vector<std::vector<SubsetSample>> out;
  out.reserve(schedule.sizes.size());
  std::vector<std::size_t> pool(universe);
  for (std::size_t m : schedule.sizes) {
    std::vector<SubsetSample> samples;
    std::set<std::vector<std::size_t>> seen;
    for (std::size_t it = 0; it < schedule.iterations; ++it) {
      for (std::uint64_t attempt = 0;; ++attempt) {
        if (attempt == max_attempts)
          throw config_error(fmt::format("could not draw a new subset of size {}", m));
        Rng rng(derive_seed(schedule.seed, {m, it, attempt}));
        std::iota(pool.begin(), pool.end(), std::size_t{0});
        for (std::size_t i = 0; i < m; ++i) {
          const std::size_t j = i + rng.uniform_index(universe - i);
          std::swap(pool[i], pool[j]);
        }
        std::vector<std::size_t> chosen(pool.begin(), pool.begin() + m);
        std::sort(chosen.begin(), chosen.end());
        if (seen.insert(chosen).second) {
          samples.push_back({m, it, std::move(chosen)});
          break;
        }
      }
    }
    out.push_back(std::move(samples));
  }
  return out;
}

Ensemble analyze_ensemble(const ReturnPanel& panel, const SubsetSchedule& schedule,
                          std::size_t mode_ranks, Execution ex) {
  const auto subsets = sample_subsets(panel.stocks(), schedule);
  if (panel.length() <= schedule.sizes.back())
    throw data_error(fmt::format("panel length {} must exceed the largest subset size {}",
                                 panel.length(), schedule.sizes.back()));

  Ensemble e;
  e.schedule = schedule;
  e.universe = panel.stocks();
  e.length = panel.length();
  e.mode_ranks = mode_ranks;
  e.by_size.resize(subsets.size());
  std::vector<std::pair<std::size_t, std::size_t>> tasks;
  for (std::size_t s = 0; s < subsets.size(); ++s) {
    e.by_size[s].resize(subsets[s].size());
    for (std::size_t i = 0; i < subsets[s].size(); ++i) tasks.emplace_back(s, i);
  }

  kernels::for_each_index(
      tasks.size(),
      [&](std::size_t task) {
        const auto [s, i] = tasks[task];
        SubsetAnalysis& a = e.by_size[s][i];
        a.sample = subsets[s][i];
        const ReturnPanel sub = panel.select(a.sample.indices);
        EigenSystem eig = eigh(correlation_matrix(sub, Execution::serial));
        a.bounds = mp_bounds(sub.length(), sub.stocks());
        a.deviating = deviating_count(eig.values, a.bounds);
        const std::size_t ranks = std::min(mode_ranks, eig.size());
        a.modes = kernels::serial::project(eig.vectors, ranks, standardize_rows(sub));
        for (std::size_t r = 0; r < ranks; ++r) {
          auto row = a.modes.row(r);
          const auto unit = normalized(row);
          std::copy(unit.begin(), unit.end(), row.begin());
        }
        a.eigenvalues = std::move(eig.values);
      },
      ex);
  return e;
}

ScalingResult eigenvalue_scaling(const Ensemble& ensemble) {
  ScalingResult out;
  for (std::size_t s = 0; s < ensemble.by_size.size(); ++s) {
    const auto& runs = ensemble.by_size[s];
    std::vector<double> ks;
    std::size_t max_k = 0;
    for (const auto& a : runs) {
      ks.push_back(static_cast<double>(a.deviating));
      max_k = std::max(max_k, a.deviating);
    }
    out.deviating_count.push_back(summarize(ks));
    for (std::size_t r = 1; r <= max_k; ++r) {
      std::vector<double> values;
      for (const auto& a : runs)
        if (a.deviating >= r) values.push_back(a.eigenvalues[r - 1]);
      out.rows.push_back({ensemble.schedule.sizes[s], r, summarize(values)});
    }
  }
  return out;
}

ScalingResult eigenvalue_scaling(const ReturnPanel& panel, const SubsetSchedule& schedule,
                                 Execution ex) {
  return eigenvalue_scaling(analyze_ensemble(panel, schedule, 0, ex));
}

namespace {

Matrix rank_modes(const Ensemble& e, std::size_t s, std::size_t rank) {
  const auto& runs = e.by_size[s];
  Matrix m(runs.size(), e.length);
  for (std::size_t i = 0; i < runs.size(); ++i) {
    auto src = runs[i].modes.row(rank - 1);
    std::copy(src.begin(), src.end(), m.row(i).begin());
  }
  return m;
}

void check_rank(const Ensemble& e, std::size_t rank) {
  if (rank < 1 || rank > e.mode_ranks)
    throw config_error(fmt::format("rank {} outside the analysed ranks 1..{}", rank, e.mode_ranks));
  if (rank > e.schedule.sizes.front())
    throw config_error(fmt::format("rank {} exceeds the smallest subset size", rank));
}

double below_k(const Ensemble& e, std::size_t s, std::size_t rank, std::size_t* count) {
  std::size_t below = 0;
  for (const auto& a : e.by_size[s])
    if (a.deviating < rank) ++below;
  *count += e.by_size[s].size();
  return static_cast<double>(below);
}

PairStats group_stats(std::size_t size_a, std::size_t size_b, std::vector<double>& rho) {
  PairStats g;
  g.size_a = size_a;
  g.size_b = size_b;
  for (double& r : rho) r = std::clamp(r, -1.0, 1.0);
  g.signed_rho = summarize(rho);
  for (double& r : rho) r = std::abs(r);
  g.abs_rho = summarize(rho);
  return g;
}

BoxStats box_or_nan(const std::vector<double>& v) {
  if (v.empty()) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return {nan, nan, nan, nan, nan};
  }
  return box_stats(v);
}

void fill_boxes(RhoResult& r) {
  std::vector<double> means, stds, abs_means, abs_stds;
  for (const auto& g : r.groups) {
    means.push_back(g.signed_rho.mean);
    abs_means.push_back(g.abs_rho.mean);
    if (g.signed_rho.std_defined) {
      stds.push_back(g.signed_rho.stddev);
      abs_stds.push_back(g.abs_rho.stddev);
    }
  }
  r.mean_box = box_or_nan(means);
  r.std_box = box_or_nan(stds);
  r.abs_mean_box = box_or_nan(abs_means);
  r.abs_std_box = box_or_nan(abs_stds);
}

}  // namespace

RhoResult rho_between(const Ensemble& ensemble, std::size_t rank, Execution ex) {
  check_rank(ensemble, rank);
  const std::size_t n = ensemble.by_size.size();
  if (n < 2) throw config_error("rho between sizes needs at least two subset sizes");
  std::vector<Matrix> modes;
  for (std::size_t s = 0; s < n; ++s) modes.push_back(rank_modes(ensemble, s, rank));

  RhoResult out;
  out.rank = rank;
  out.correlations_per_group = ensemble.schedule.iterations * ensemble.schedule.iterations;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const Matrix d = kernels::cross_dot(modes[a], modes[b], ex);
      std::vector<double> rho(d.data().begin(), d.data().end());
      PairStats g = group_stats(ensemble.schedule.sizes[a], ensemble.schedule.sizes[b], rho);
      std::size_t count = 0;
      const double below = below_k(ensemble, a, rank, &count) + below_k(ensemble, b, rank, &count);
      g.below_k_fraction = below / static_cast<double>(count);
      out.groups.push_back(std::move(g));
    }
  }
  fill_boxes(out);
  return out;
}

RhoResult rho_within(const Ensemble& ensemble, std::size_t rank, Execution ex) {
  check_rank(ensemble, rank);
  if (ensemble.schedule.iterations < 2)
    throw config_error("rho within a size needs at least 2 iterations");
  RhoResult out;
  out.rank = rank;
  const std::size_t it = ensemble.schedule.iterations;
  out.correlations_per_group = it * (it - 1) / 2;
  for (std::size_t s = 0; s < ensemble.by_size.size(); ++s) {
    const Matrix m = rank_modes(ensemble, s, rank);
    const Matrix d = kernels::gram(m, 1.0, ex);
    std::vector<double> rho;
    rho.reserve(out.correlations_per_group);
    for (std::size_t i = 0; i < d.rows(); ++i)
      for (std::size_t j = i + 1; j < d.cols(); ++j) rho.push_back(d(i, j));
    const std::size_t size = ensemble.schedule.sizes[s];
    PairStats g = group_stats(size, size, rho);
    std::size_t count = 0;
    g.below_k_fraction = below_k(ensemble, s, rank, &count) / static_cast<double>(count);
    out.groups.push_back(std::move(g));
  }
  fill_boxes(out);
  return out;
}

RhoResult rho_between(const ReturnPanel& panel, const SubsetSchedule& schedule, std::size_t rank,
                      Execution ex) {
  return rho_between(analyze_ensemble(panel, schedule, rank, ex), rank, ex);
}

RhoResult rho_within(const ReturnPanel& panel, const SubsetSchedule& schedule, std::size_t rank,
                     Execution ex) {
  return rho_within(analyze_ensemble(panel, schedule, rank, ex), rank, ex);
}

EconomicMeaning economic_meaning(const ReturnPanel& panel, Execution ex) {
  const EigenSystem eig = eigh(correlation_matrix(panel, ex));
  EconomicMeaning out;
  out.bounds = mp_bounds(panel.length(), panel.stocks());
  out.deviating = deviating_count(eig.values, out.bounds);
  out.factor_count = std::max<std::size_t>(out.deviating, 1);

  const Matrix modes = all_eigenmodes(panel, eig, ex);
  const auto ew = max_corr_profile(modes, equal_weighted(panel));
  const auto factor = max_corr_profile(modes, factor_scores(panel, eig, out.factor_count));
  for (std::size_t i = 0; i < eig.size(); ++i) {
    ModeMeaning m;
    m.rank = i + 1;
    m.eigenvalue = eig.values[i];
    m.deviating = i < out.deviating;
    m.equal_weighted = ew[i];
    m.factor = factor[i];
    m.ew_above_benchmark = ew[i].max_abs > out.benchmark;
    m.factor_above_benchmark = factor[i].max_abs > out.benchmark;
    out.modes.push_back(std::move(m));
  }
  return out;
}

namespace {

nlohmann::json bounds_json(const MPBounds& b) {
  return {{"q", b.q}, {"lambda_minus", b.lambda_minus}, {"lambda_plus", b.lambda_plus}};
}

nlohmann::json box_json(const BoxStats& b) {
  if (std::isnan(b.min)) return nullptr;
  return to_json(b);
}

nlohmann::json profile_json(const ProfileEntry& p) {
  return {{"max_abs", p.max_abs}, {"signed", p.signed_at_max}, {"reference", p.reference}};
}

}  // namespace

nlohmann::json to_json(const ScalingResult& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows) {
    auto j = to_json(row.summary);
    j["size"] = row.size;
    j["rank"] = row.rank;
    rows.push_back(std::move(j));
  }
  nlohmann::json ks = nlohmann::json::array();
  for (const auto& k : r.deviating_count) ks.push_back(to_json(k));
  return {{"rows", std::move(rows)}, {"deviating_count", std::move(ks)}};
}

nlohmann::json to_json(const RhoResult& r) {
  nlohmann::json groups = nlohmann::json::array();
  for (const auto& g : r.groups)
    groups.push_back({{"size_a", g.size_a},
                      {"size_b", g.size_b},
                      {"signed", to_json(g.signed_rho)},
                      {"abs", to_json(g.abs_rho)},
                      {"below_k_fraction", g.below_k_fraction}});
  return {{"rank", r.rank},
          {"group_count", r.groups.size()},
          {"correlations_per_group", r.correlations_per_group},
          {"groups", std::move(groups)},
          {"box",
           {{"mean", box_json(r.mean_box)},
            {"std", box_json(r.std_box)},
            {"abs_mean", box_json(r.abs_mean_box)},
            {"abs_std", box_json(r.abs_std_box)}}}};
}

nlohmann::json to_json(const EconomicMeaning& r) {
  nlohmann::json modes = nlohmann::json::array();
  for (const auto& m : r.modes)
    modes.push_back({{"rank", m.rank},
                     {"eigenvalue", m.eigenvalue},
                     {"deviating", m.deviating},
                     {"equal_weighted", profile_json(m.equal_weighted)},
                     {"factor", profile_json(m.factor)},
                     {"ew_above_benchmark", m.ew_above_benchmark},
                     {"factor_above_benchmark", m.factor_above_benchmark}});
  return {{"bounds", bounds_json(r.bounds)},
          {"deviating", r.deviating},
          {"factor_count", r.factor_count},
          {"benchmark", r.benchmark},
          {"modes", std::move(modes)}};
}

}  // namespace eigenscale
