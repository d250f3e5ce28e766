// eigenscale: correlation spectra, Marchenko-Pastur filtering and subset
// resampling experiments on stock return panels.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "eigenscale/commands.hpp"
#include "eigenscale/error.hpp"

namespace es = eigenscale;

namespace {

std::string default_out() {
  if (const char* env = std::getenv("EIGENSCALE_OUT"); env && *env) return env;
  return ".";
}

struct PanelFlags {
  std::string prices, sectors, out = default_out(), emit = "json,csv";
  std::size_t min_sector = 5;
  bool no_filter = false;
  int threads = 0;
  bool serial = false;

  void add(CLI::App* app) {
    app->add_option("--prices", prices, "Wide price CSV: date,<ticker>,...")->required();
    app->add_option("--sectors", sectors, "Sector CSV: ticker,sector")->required();
    app->add_option("--out", out, "Output directory (default: $EIGENSCALE_OUT or .)");
    app->add_option("--emit", emit, "Comma list of output formats: json,csv");
    app->add_option("--min-sector", min_sector,
                    "Drop sectors with fewer surviving stocks than this")
        ->capture_default_str();
    app->add_flag("--no-filter", no_filter, "Skip the skewness/kurtosis/sector filters");
    app->add_option("--threads", threads, "OpenMP threads (0 = runtime default)");
    app->add_flag("--serial", serial, "Use the serial reference kernels");
  }

  es::RunConfig config() const {
    es::RunConfig c;
    c.prices = prices;
    c.sectors = sectors;
    c.out = out;
    c.min_sector = min_sector;
    c.filter = !no_filter;
    c.execution = serial ? es::Execution::serial : es::Execution::parallel;
    es::parse_emit(c, emit);
    es::kernels::omp::set_threads(threads);
    return c;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random-matrix analysis of stock correlation spectra under subset resampling"};
  app.set_config("--config", "", "Optional TOML/INI file whose keys mirror the flags");
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "Write a synthetic market (or noise) panel");
  es::MarketModelSpec spec;
  bool noise = false;
  std::string synth_out = default_out();
  synth->add_option("--stocks", spec.stocks, "Number of stocks")->capture_default_str();
  synth->add_option("--length", spec.length, "Number of daily returns")->capture_default_str();
  synth->add_option("--sectors", spec.sector_count, "Number of sectors")->capture_default_str();
  synth->add_option("--sector-sizes", spec.sector_sizes, "Explicit sector sizes")->delimiter(',');
  synth->add_option("--beta-market", spec.beta_market, "Market loading")->capture_default_str();
  synth->add_option("--beta-sector", spec.beta_sector, "Sector loading")->capture_default_str();
  synth->add_option("--daily-vol", spec.daily_vol, "Return scale")->capture_default_str();
  synth->add_option("--seed", spec.seed, "Generator seed")->capture_default_str();
  synth->add_flag("--noise", noise, "IID normal panel instead of the factor model");
  synth->add_option("--out", synth_out, "Output directory");

  // ingest-check
  auto* check = app.add_subcommand(
      "ingest-check",
      "Validate inputs and report the universe filters. Excludes |skewness| > 2, "
      "Pearson kurtosis > 30 (normal = 3) and sectors below --min-sector.");
  PanelFlags check_flags;
  check_flags.add(check);

  // spectrum
  auto* spectrum = app.add_subcommand(
      "spectrum", "Eigenvalues, MP bounds, deviating set and mode/reference correlation profiles");
  PanelFlags spectrum_flags;
  spectrum_flags.add(spectrum);

  // experiment
  auto* experiment = app.add_subcommand("experiment", "Subset resampling experiments");
  experiment->require_subcommand(1);
  PanelFlags exp_flags;
  std::size_t min_size = 50, step = 10, max_size = 0, iterations = 100;
  std::uint64_t seed = 1;
  std::vector<std::size_t> ranks{1};
  std::string kind;
  for (const char* name : {"scaling", "between", "within"}) {
    auto* sub = experiment->add_subcommand(name, "");
    exp_flags.add(sub);
    sub->add_option("--min-size", min_size, "Smallest subset size")->capture_default_str();
    sub->add_option("--step", step, "Subset size increment")->capture_default_str();
    sub->add_option("--max-size", max_size,
                    "Largest subset size (default: largest feasible grid size up to 200)");
    sub->add_option("--iterations", iterations, "Subsets per size")->capture_default_str();
    sub->add_option("--seed", seed, "Master seed")->capture_default_str();
    sub->add_option("--rank", ranks, "Eigenmode rank(s), comma separated")->delimiter(',');
    sub->callback([&kind, name] { kind = name; });
  }
  experiment->get_subcommand("scaling")->description(
      "Mean/std of deviating eigenvalues per subset size");
  experiment->get_subcommand("between")->description(
      "Rank-matched eigenmode correlations between different sizes");
  experiment->get_subcommand("within")->description(
      "Rank-matched eigenmode correlations within each size");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << es::error_line(es::ErrorKind::config, e.what()) << "\n";
    return es::exit_code(es::ErrorKind::config);
  }

  try {
    std::vector<std::filesystem::path> written;
    if (synth->parsed()) {
      written = es::cmd_synth(spec, noise, synth_out);
    } else if (check->parsed()) {
      written = es::cmd_ingest_check(check_flags.config());
    } else if (spectrum->parsed()) {
      written = es::cmd_spectrum(spectrum_flags.config());
    } else if (experiment->parsed()) {
      es::RunConfig c = exp_flags.config();
      c.min_size = min_size;
      c.step = step;
      if (max_size > 0) c.max_size = max_size;
      c.iterations = iterations;
      c.seed = seed;
      c.ranks = ranks;
      written = es::cmd_experiment(c, es::parse_experiment_kind(kind));
    }
    for (const auto& p : written) std::cout << p.string() << "\n";
  } catch (const es::Error& e) {
    std::cerr << es::error_line(e.kind(), e.what()) << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << es::error_line(es::ErrorKind::numerical, e.what()) << "\n";
    return es::exit_code(es::ErrorKind::numerical);
  }
  return 0;
}
