#include "eigenscale/commands.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <fmt/format.h>

#include "csv.hpp"
#include "eigenscale/error.hpp"
#include "eigenscale/experiments.hpp"

namespace eigenscale {

namespace fs = std::filesystem;

ExperimentKind parse_experiment_kind(const std::string& name) {
  if (name == "scaling") return ExperimentKind::scaling;
  if (name == "between") return ExperimentKind::between;
  if (name == "within") return ExperimentKind::within;
  throw config_error(fmt::format("unknown experiment '{}' (scaling|between|within)", name));
}

const char* experiment_kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::scaling: return "scaling";
    case ExperimentKind::between: return "between";
    case ExperimentKind::within: return "within";
  }
  return "?";
}

void parse_emit(RunConfig& config, const std::string& list) {
  config.emit_json = config.emit_csv = false;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "json")
      config.emit_json = true;
    else if (item == "csv")
      config.emit_csv = true;
    else if (!item.empty())
      throw config_error(fmt::format("unknown --emit format '{}'", item));
  }
  if (!config.emit_json && !config.emit_csv) throw config_error("--emit selects no output format");
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", h);
}

std::string error_line(ErrorKind kind, const std::string& message) {
  return nlohmann::json{{"error", kind_name(kind)},
                        {"exit_code", exit_code(kind)},
                        {"message", message}}
      .dump();
}

PreparedPanel prepare_panel(const RunConfig& config) {
  if (config.prices.empty()) throw config_error("--prices is required");
  if (config.sectors.empty()) throw config_error("--sectors is required");
  const std::string prices = csv::read_file(config.prices);
  const std::string sectors = csv::read_file(config.sectors);
  const LoadedPanel loaded = parse_price_panel(prices, sectors);

  PreparedPanel out;
  out.input_digest = fnv1a_hex(prices + '\0' + sectors);
  ReturnPanel returns = log_returns(loaded.prices, loaded.sectors);
  if (config.filter) {
    auto filtered = filter_universe_report(returns, descriptive_stats(returns),
                                           UniverseFilter{.min_sector = config.min_sector});
    out.panel = std::move(filtered.panel);
    out.report = std::move(filtered.report);
  } else {
    out.report.input_stocks = out.report.kept_stocks = returns.stocks();
    out.panel = std::move(returns);
  }
  return out;
}

namespace {

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw io_error(fmt::format("cannot create output directory '{}': {}", dir.string(),
                                     ec.message()));
}

constexpr std::size_t kDefaultMaxSize = 200;

SubsetSchedule resolve_schedule(const RunConfig& config, const ReturnPanel& panel) {
  std::size_t max_size = 0;
  if (config.max_size) {
    max_size = *config.max_size;
  } else {
    // Largest grid size up to kDefaultMaxSize that still admits distinct
    // subsets and L > M.
    const std::size_t limit = std::min(panel.stocks(), kDefaultMaxSize);
    for (std::size_t m = config.min_size; m <= limit; m += config.step)
      if (m < panel.length() && binomial(panel.stocks(), m) >= config.iterations) max_size = m;
    if (max_size == 0)
      throw config_error("no feasible subset size for this panel; set --min-size/--max-size");
  }
  auto s = SubsetSchedule::arithmetic(config.min_size, config.step, max_size, config.iterations,
                                      config.seed);
  s.validate(panel.stocks(), 1);
  return s;
}

struct RunContext {
  std::string command;
  std::string config_hash;
  nlohmann::json header;
  std::vector<fs::path> written;
  const RunConfig* config;

  std::string csv_preamble() const {
    std::string text = fmt::format("# eigenscale {}\n", command);
    if (header.contains("schedule")) {
      const auto& s = header["schedule"];
      std::string sizes;
      for (const auto& m : s["sizes"]) sizes += (sizes.empty() ? "" : " ") + m.dump();
      text += fmt::format("# schedule: sizes=[{}] iterations={} seed={}\n", sizes,
                          s["iterations"].get<std::size_t>(), s["seed"].get<std::uint64_t>());
    }
    text += fmt::format("# config_hash: {}\n", config_hash);
    return text;
  }

  void csv(const std::string& name, const std::string& body) {
    if (!config->emit_csv) return;
    const fs::path p = config->out / name;
    csv::write_file(p, csv_preamble() + body);
    written.push_back(p);
  }

  void json(const std::string& name, nlohmann::json body) {
    if (!config->emit_json) return;
    nlohmann::json doc = header;
    doc["command"] = command;
    doc["config_hash"] = config_hash;
    for (auto& [k, v] : body.items()) doc[k] = std::move(v);
    const fs::path p = config->out / name;
    csv::write_file(p, doc.dump(2) + "\n");
    written.push_back(p);
  }
};

RunContext make_context(const RunConfig& config, const std::string& command,
                        const PreparedPanel& prepared, const SubsetSchedule* schedule) {
  RunContext ctx;
  ctx.command = command;
  ctx.config = &config;
  nlohmann::json canonical{{"command", command},
                           {"input_digest", prepared.input_digest},
                           {"filter", config.filter},
                           {"min_sector", config.min_sector},
                           {"ranks", config.ranks}};
  if (schedule) canonical["schedule"] = schedule->to_json();
  ctx.config_hash = fnv1a_hex(canonical.dump());
  ctx.header = {{"input",
                 {{"prices", config.prices.string()},
                  {"sectors", config.sectors.string()},
                  {"digest", prepared.input_digest},
                  {"stocks", prepared.panel.stocks()},
                  {"length", prepared.panel.length()}}}};
  if (schedule) {
    ctx.header["schedule"] = schedule->to_json();
    ctx.header["seed"] = schedule->seed;
  }
  return ctx;
}

std::string num(double x) { return std::isfinite(x) ? csv::number(x) : "nan"; }

std::string box_rows(std::size_t rank, const BoxStats& b, const char* kind) {
  return fmt::format("{},{},{},{},{},{},{}\n", rank, num(b.min), num(b.q1), num(b.median),
                     num(b.q3), num(b.max), kind);
}

}  // namespace

std::vector<fs::path> cmd_ingest_check(const RunConfig& config) {
  ensure_dir(config.out);
  const std::string prices = csv::read_file(config.prices);
  const std::string sectors = csv::read_file(config.sectors);
  const LoadedPanel loaded = parse_price_panel(prices, sectors);
  const ReturnPanel returns = log_returns(loaded.prices, loaded.sectors);
  const DescriptiveStats stats = descriptive_stats(returns);
  const auto filtered =
      filter_universe_report(returns, stats, UniverseFilter{.min_sector = config.min_sector});

  PreparedPanel prepared{filtered.panel, filtered.report, fnv1a_hex(prices + '\0' + sectors)};
  RunContext ctx = make_context(config, "ingest-check", prepared, nullptr);

  std::string body = "ticker,sector,mean,std,skewness,kurtosis,zero_variance\n";
  nlohmann::json per_stock = nlohmann::json::array();
  for (std::size_t j = 0; j < returns.stocks(); ++j) {
    const auto& s = stats.stocks[j];
    body += fmt::format("{},{},{},{},{},{},{}\n", csv::escape(returns.tickers[j]),
                        csv::escape(returns.sectors[j]), num(s.mean), num(s.stddev),
                        num(s.skewness), num(s.kurtosis), s.zero_variance ? 1 : 0);
    per_stock.push_back({{"ticker", returns.tickers[j]},
                         {"sector", returns.sectors[j]},
                         {"mean", s.mean},
                         {"std", s.stddev},
                         {"skewness", s.zero_variance ? nlohmann::json() : nlohmann::json(s.skewness)},
                         {"kurtosis", s.zero_variance ? nlohmann::json() : nlohmann::json(s.kurtosis)},
                         {"zero_variance", s.zero_variance}});
  }
  ctx.csv("stats.csv", body);
  ctx.json("filter_report.json", {{"kurtosis_convention", "pearson (normal = 3)"},
                                  {"filter_report", filtered.report.to_json()},
                                  {"stocks", std::move(per_stock)}});
  return ctx.written;
}

std::vector<fs::path> cmd_spectrum(const RunConfig& config) {
  const PreparedPanel prepared = prepare_panel(config);
  ensure_dir(config.out);
  RunContext ctx = make_context(config, "spectrum", prepared, nullptr);
  const EconomicMeaning meaning = economic_meaning(prepared.panel, config.execution);

  std::string eig_csv = "rank,eigenvalue,deviating\n";
  std::string profile_csv =
      "rank,eigenvalue,deviating,ew_max_abs,ew_signed,ew_reference,ew_above_benchmark,"
      "factor_max_abs,factor_signed,factor_reference,factor_above_benchmark\n";
  std::vector<double> values;
  for (const auto& m : meaning.modes) {
    values.push_back(m.eigenvalue);
    eig_csv += fmt::format("{},{},{}\n", m.rank, num(m.eigenvalue), m.deviating ? 1 : 0);
    profile_csv += fmt::format(
        "{},{},{},{},{},{},{},{},{},{},{}\n", m.rank, num(m.eigenvalue), m.deviating ? 1 : 0,
        num(m.equal_weighted.max_abs), num(m.equal_weighted.signed_at_max),
        csv::escape(m.equal_weighted.reference), m.ew_above_benchmark ? 1 : 0,
        num(m.factor.max_abs), num(m.factor.signed_at_max), csv::escape(m.factor.reference),
        m.factor_above_benchmark ? 1 : 0);
  }
  ctx.csv("eigenvalues.csv", eig_csv);
  ctx.csv("profile.csv", profile_csv);

  std::vector<double> dev(values.begin(), values.begin() + meaning.deviating);
  ctx.json("spectrum.json", {{"filter_report", prepared.report.to_json()},
                             {"bounds",
                              {{"q", meaning.bounds.q},
                               {"lambda_minus", meaning.bounds.lambda_minus},
                               {"lambda_plus", meaning.bounds.lambda_plus}}},
                             {"eigenvalues", values},
                             {"deviating", {{"count", meaning.deviating}, {"values", dev}}},
                             {"economic_meaning", to_json(meaning)}});
  return ctx.written;
}

std::vector<fs::path> cmd_experiment(const RunConfig& config, ExperimentKind kind) {
  const PreparedPanel prepared = prepare_panel(config);
  const SubsetSchedule schedule = resolve_schedule(config, prepared.panel);
  if (kind != ExperimentKind::scaling) {
    schedule.validate(prepared.panel.stocks(), kind == ExperimentKind::within ? 2 : 1);
    if (config.ranks.empty()) throw config_error("--rank must list at least one rank");
    for (std::size_t r : config.ranks)
      if (r < 1 || r > schedule.sizes.front())
        throw config_error(fmt::format("rank {} outside 1..{} (smallest subset size)", r,
                                       schedule.sizes.front()));
  }
  ensure_dir(config.out);
  const std::string name = experiment_kind_name(kind);
  RunContext ctx = make_context(config, fmt::format("experiment {}", name), prepared, &schedule);

  const std::size_t mode_ranks =
      kind == ExperimentKind::scaling ? 0 : *std::max_element(config.ranks.begin(), config.ranks.end());
  const Ensemble ensemble = analyze_ensemble(prepared.panel, schedule, mode_ranks, config.execution);

  if (kind == ExperimentKind::scaling) {
    const ScalingResult r = eigenvalue_scaling(ensemble);
    std::string body = "size,rank,mean,std,n\n";
    for (const auto& row : r.rows)
      body += fmt::format("{},{},{},{},{}\n", row.size, row.rank, num(row.summary.mean),
                          num(row.summary.stddev), row.summary.n);
    std::string k_body = "size,mean_k,std_k,n\n";
    for (std::size_t s = 0; s < schedule.sizes.size(); ++s) {
      const auto& k = r.deviating_count[s];
      k_body += fmt::format("{},{},{},{}\n", schedule.sizes[s], num(k.mean), num(k.stddev), k.n);
    }
    ctx.csv("scaling.csv", body);
    ctx.csv("scaling_k.csv", k_body);
    ctx.json("scaling.json", {{"size_count", schedule.sizes.size()}, {"scaling", to_json(r)}});
    return ctx.written;
  }

  const bool between = kind == ExperimentKind::between;
  std::string groups = between ? "rank,size_a,size_b,mean,std,n,abs_mean,abs_std,below_k_fraction\n"
                               : "rank,size,mean,std,n,abs_mean,abs_std,below_k_fraction\n";
  std::string boxes = "rank,min,q1,median,q3,max,kind\n";
  nlohmann::json results = nlohmann::json::array();
  std::size_t group_count = 0, per_group = 0;
  for (std::size_t rank : config.ranks) {
    const RhoResult r = between ? rho_between(ensemble, rank, config.execution)
                                : rho_within(ensemble, rank, config.execution);
    group_count = r.groups.size();
    per_group = r.correlations_per_group;
    for (const auto& g : r.groups) {
      const std::string sizes =
          between ? fmt::format("{},{}", g.size_a, g.size_b) : std::to_string(g.size_a);
      groups += fmt::format("{},{},{},{},{},{},{},{}\n", rank, sizes, num(g.signed_rho.mean),
                            num(g.signed_rho.stddev), g.signed_rho.n, num(g.abs_rho.mean),
                            num(g.abs_rho.stddev), num(g.below_k_fraction));
    }
    boxes += box_rows(rank, r.mean_box, "mean") + box_rows(rank, r.std_box, "std") +
             box_rows(rank, r.abs_mean_box, "abs_mean") + box_rows(rank, r.abs_std_box, "abs_std");
    results.push_back(to_json(r));
  }
  ctx.csv(between ? "between_pairs.csv" : "within_sizes.csv", groups);
  ctx.csv(fmt::format("{}_box.csv", name), boxes);
  ctx.json(fmt::format("{}.json", name), {{"size_count", schedule.sizes.size()},
                                          {"group_count", group_count},
                                          {"correlations_per_group", per_group},
                                          {"results", std::move(results)}});
  return ctx.written;
}

std::vector<fs::path> cmd_synth(const MarketModelSpec& spec, bool noise, const fs::path& out) {
  if (noise) {
    SyntheticPanel s;
    s.panel = generate_noise(spec.stocks, spec.length, spec.seed);
    const nlohmann::json spec_json{{"model", "noise"},
                                   {"stocks", spec.stocks},
                                   {"length", spec.length},
                                   {"seed", spec.seed}};
    const auto files = write_synthetic(out, s, spec_json);
    return {files.prices, files.sectors, files.sidecar};
  }
  const auto files = write_synthetic(out, generate_market(spec), spec.to_json());
  return {files.prices, files.sectors, files.sidecar};
}

}  // namespace eigenscale
