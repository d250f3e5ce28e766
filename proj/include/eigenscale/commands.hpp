#pragma once

// Command implementations behind the eigenscale CLI. Kept in the library so
// the output files can be produced and compared in-process.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "eigenscale/error.hpp"
#include "eigenscale/ingest.hpp"
#include "eigenscale/kernels.hpp"
#include "eigenscale/synth.hpp"

namespace eigenscale {

struct RunConfig {
  std::filesystem::path prices;
  std::filesystem::path sectors;
  std::size_t min_size = 50;
  std::size_t step = 10;
  std::optional<std::size_t> max_size;  // default: largest feasible grid size <= 200
  std::size_t iterations = 100;
  std::uint64_t seed = 1;
  std::vector<std::size_t> ranks{1};
  std::size_t min_sector = 5;
  bool filter = true;
  std::filesystem::path out = ".";
  bool emit_json = true;
  bool emit_csv = true;
  Execution execution = Execution::parallel;
};

enum class ExperimentKind { scaling, between, within };

ExperimentKind parse_experiment_kind(const std::string& name);
const char* experiment_kind_name(ExperimentKind kind);

/// Sets emit flags from a comma list such as "json,csv".
void parse_emit(RunConfig& config, const std::string& list);

/// Loads, filters and returns the analysis panel.
struct PreparedPanel {
  ReturnPanel panel;
  FilterReport report;
  std::string input_digest;  // FNV-1a of the price and sector files
};
PreparedPanel prepare_panel(const RunConfig& config);

/// FNV-1a 64 over `text`, hex encoded.
std::string fnv1a_hex(const std::string& text);

/// Each command returns the list of files it wrote.
std::vector<std::filesystem::path> cmd_ingest_check(const RunConfig& config);
std::vector<std::filesystem::path> cmd_spectrum(const RunConfig& config);
std::vector<std::filesystem::path> cmd_experiment(const RunConfig& config, ExperimentKind kind);
std::vector<std::filesystem::path> cmd_synth(const MarketModelSpec& spec, bool noise,
                                             const std::filesystem::path& out);

/// Single-line JSON error record for the diagnostic stream.
std::string error_line(ErrorKind kind, const std::string& message);

}  // namespace eigenscale
