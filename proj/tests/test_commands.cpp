#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "eigenscale/commands.hpp"
#include "eigenscale/error.hpp"
#include "eigenscale/synth.hpp"

using namespace eigenscale;
namespace fs = std::filesystem;
using Catch::Matchers::ContainsSubstring;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "eigenscale_commands" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args, const fs::path& stderr_file) {
  const std::string cmd =
      std::string("\"") + EIGENSCALE_CLI_PATH + "\" " + args + " > /dev/null 2> \"" +
      stderr_file.string() + "\"";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// Small synthetic market on disk, shared by the command tests.
const fs::path& market_dir() {
  static const fs::path dir = [] {
    const fs::path d = scratch("market");
    MarketModelSpec spec;
    spec.stocks = 60;
    spec.length = 300;
    spec.sector_count = 3;
    spec.daily_vol = 0.01;
    cmd_synth(spec, false, d);
    return d;
  }();
  return dir;
}

RunConfig small_run(const fs::path& out) {
  RunConfig c;
  c.prices = market_dir() / "prices.csv";
  c.sectors = market_dir() / "sectors.csv";
  c.min_size = 10;
  c.step = 10;
  c.max_size = 40;
  c.iterations = 6;
  c.seed = 9;
  c.ranks = {1, 2, 3};
  c.out = out;
  return c;
}

std::map<std::string, std::string> contents(const std::vector<fs::path>& files) {
  std::map<std::string, std::string> out;
  for (const auto& f : files) out[f.filename().string()] = slurp(f);
  return out;
}

}  // namespace

TEST_CASE("flag helpers", "[commands]") {
  RunConfig c;
  parse_emit(c, "csv");
  CHECK(c.emit_csv);
  CHECK_FALSE(c.emit_json);
  parse_emit(c, "json,csv");
  CHECK(c.emit_json);
  CHECK_THROWS_AS(parse_emit(c, "xml"), Error);
  CHECK_THROWS_AS(parse_emit(c, ""), Error);
  CHECK(parse_experiment_kind("within") == ExperimentKind::within);
  CHECK_THROWS_AS(parse_experiment_kind("sideways"), Error);
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");

  const auto line = nlohmann::json::parse(error_line(ErrorKind::data, "bad \"row\"\n"));
  CHECK(line["error"] == "data");
  CHECK(line["exit_code"] == 3);
  CHECK(line["message"] == "bad \"row\"\n");
  CHECK(exit_code(ErrorKind::config) == 2);
  CHECK(exit_code(ErrorKind::io) == 2);
  CHECK(exit_code(ErrorKind::numerical) == 4);
}

TEST_CASE("experiment outputs are reproducible and carry the schedule", "[commands]") {
  for (auto kind : {ExperimentKind::scaling, ExperimentKind::between, ExperimentKind::within}) {
    const std::string name = experiment_kind_name(kind);
    auto first = small_run(scratch(name + "_a"));
    auto second = small_run(scratch(name + "_b"));
    second.execution = Execution::serial;
    auto a = contents(cmd_experiment(first, kind));
    auto b = contents(cmd_experiment(second, kind));
    REQUIRE(a.size() == 3);
    CHECK(a == b);
    // a rerun into the same directory overwrites with identical bytes
    CHECK(contents(cmd_experiment(first, kind)) == a);

    for (const auto& [file, text] : a) {
      if (file.ends_with(".csv")) {
        CHECK_THAT(text, ContainsSubstring("# schedule: sizes=[10 20 30 40] iterations=6 seed=9"));
        CHECK_THAT(text, ContainsSubstring("# config_hash: "));
      } else {
        const auto j = nlohmann::json::parse(text);
        CHECK(j["seed"] == 9);
        CHECK(j["schedule"]["sizes"].size() == 4);
        CHECK(j["size_count"] == 4);
      }
    }
    auto reseeded = small_run(scratch(name + "_c"));
    reseeded.seed = 10;
    CHECK(contents(cmd_experiment(reseeded, kind)) != a);
  }
}

TEST_CASE("between and within metadata count groups", "[commands]") {
  auto c = small_run(scratch("counts"));
  const auto between = nlohmann::json::parse(
      slurp(cmd_experiment(c, ExperimentKind::between).back()));
  CHECK(between["group_count"] == 6);
  CHECK(between["correlations_per_group"] == 36);
  const auto within = nlohmann::json::parse(
      slurp(cmd_experiment(c, ExperimentKind::within).back()));
  CHECK(within["group_count"] == 4);
  CHECK(within["correlations_per_group"] == 15);
  CHECK(within["results"].size() == 3);

  const std::string box = slurp(c.out / "within_box.csv");
  CHECK_THAT(box, ContainsSubstring("rank,min,q1,median,q3,max,kind\n"));
  CHECK_THAT(box, ContainsSubstring(",mean\n"));
  CHECK_THAT(box, ContainsSubstring(",std\n"));
}

TEST_CASE("spectrum and ingest-check write their reports", "[commands]") {
  auto c = small_run(scratch("spectrum"));
  const auto files = contents(cmd_spectrum(c));
  REQUIRE(files.contains("spectrum.json"));
  const auto j = nlohmann::json::parse(files.at("spectrum.json"));
  CHECK(j["eigenvalues"].size() == 60);
  CHECK(j["deviating"]["count"].get<std::size_t>() >= 1);
  CHECK(j["bounds"]["q"] == 5.0);
  CHECK(contents(cmd_spectrum(c)) == files);

  c.emit_json = false;
  const auto only_csv = cmd_ingest_check(c);
  REQUIRE(only_csv.size() == 1);
  CHECK(only_csv[0].filename() == "stats.csv");
}

TEST_CASE("default max size stays feasible", "[commands]") {
  auto c = small_run(scratch("default_max"));
  c.max_size.reset();
  c.min_size = 50;
  c.iterations = 2;
  c.ranks = {1};
  const auto j = nlohmann::json::parse(slurp(cmd_experiment(c, ExperimentKind::within).back()));
  // 60 stocks: C(60, 60) = 1 < 2, so the grid stops at 50
  CHECK(j["schedule"]["sizes"] == nlohmann::json::array({50}));
}

TEST_CASE("CLI exit codes and error records", "[commands][cli]") {
  const fs::path dir = scratch("cli");
  const fs::path err = dir / "stderr.txt";
  const std::string prices = (market_dir() / "prices.csv").string();
  const std::string sectors = (market_dir() / "sectors.csv").string();

  CHECK(run_cli("experiment scaling --sectors " + sectors, err) == 2);
  CHECK(nlohmann::json::parse(slurp(err))["error"] == "config");
  CHECK(run_cli("frobnicate", err) == 2);
  CHECK(run_cli("spectrum --prices " + (dir / "nope.csv").string() + " --sectors " + sectors, err) == 2);
  CHECK(nlohmann::json::parse(slurp(err))["error"] == "io");

  std::ofstream(dir / "bad.csv") << "date,S01\n2020-01-02,1\n2020-01-03,-2\n";
  std::ofstream(dir / "bad_sectors.csv") << "ticker,sector\nS01,x\n";
  CHECK(run_cli("ingest-check --prices " + (dir / "bad.csv").string() + " --sectors " +
                    (dir / "bad_sectors.csv").string() + " --out " + dir.string(),
                err) == 3);
  const auto record = nlohmann::json::parse(slurp(err));
  CHECK(record["exit_code"] == 3);
  CHECK_THAT(record["message"].get<std::string>(), ContainsSubstring("line 3"));

  CHECK(run_cli("experiment within --prices " + prices + " --sectors " + sectors +
                    " --min-size 10 --max-size 20 --iterations 1 --out " + dir.string(),
                err) == 2);
  CHECK(run_cli("experiment between --prices " + prices + " --sectors " + sectors +
                    " --min-size 10 --max-size 20 --iterations 3 --rank 11 --out " + dir.string(),
                err) == 2);
}

TEST_CASE("CLI runs are byte-identical across reruns and thread counts", "[commands][cli]") {
  const fs::path dir = scratch("cli_rerun");
  const fs::path err = dir / "stderr.txt";
  REQUIRE(run_cli("synth --stocks 40 --length 200 --sectors 1 --beta-sector 0 --seed 5 --out " +
                      (dir / "data").string(),
                  err) == 0);
  const auto sidecar = nlohmann::json::parse(slurp(dir / "data" / "synth.json"));
  CHECK(sidecar["spec"]["sector_count"] == 1);
  CHECK(sidecar["spec"]["beta_sector"] == 0.0);

  const std::string common = "experiment between --prices " + (dir / "data" / "prices.csv").string() +
                             " --sectors " + (dir / "data" / "sectors.csv").string() +
                             " --min-size 10 --step 5 --max-size 30 --iterations 5 --seed 3 --rank 1,2";
  REQUIRE(run_cli(common + " --threads 1 --out " + (dir / "a").string(), err) == 0);
  REQUIRE(run_cli(common + " --threads 4 --out " + (dir / "b").string(), err) == 0);
  REQUIRE(run_cli(common + " --serial --out " + (dir / "c").string(), err) == 0);
  for (const char* f : {"between.json", "between_pairs.csv", "between_box.csv"}) {
    const std::string a = slurp(dir / "a" / f);
    CHECK(!a.empty());
    CHECK(a == slurp(dir / "b" / f));
    CHECK(a == slurp(dir / "c" / f));
  }
}
