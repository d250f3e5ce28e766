#pragma once

// Minimal RFC 4180 reader/writer helpers shared by the file formats.

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace eigenscale::csv {

struct Record {
  std::size_t line = 0;  // 1-based line where the record starts
  std::vector<std::string> fields;
};

/// Splits CSV text into records. Quoted fields may contain commas, doubled
/// quotes and line breaks. Blank lines are skipped. Throws Error(data) on an
/// unterminated quote.
std::vector<Record> parse(std::string_view text);

/// Quotes a field when it contains a comma, quote or line break.
std::string escape(std::string_view field);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& text);

/// Round-trip decimal formatting (17 significant digits).
std::string number(double x);

}  // namespace eigenscale::csv
