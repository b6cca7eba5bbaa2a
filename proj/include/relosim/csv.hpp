// Small CSV helpers for the toolkit's flat file formats (no quoting; all
// fields are numbers or plain identifiers).
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace relosim::csv {

// Splits one line on commas. Empty fields are kept.
std::vector<std::string> split(const std::string& line);

// Reads all non-empty lines of a file; throws InputError if unreadable.
std::vector<std::string> read_lines(const std::string& path);

// Strict numeric parsing; throw InputError with `context` on failure.
std::int64_t parse_i64(const std::string& field, const std::string& context);
double parse_double(const std::string& field, const std::string& context);

std::string join(const std::vector<std::string>& fields);

// Fixed-format double for deterministic output files.
std::string format_double(double value);

// A headered CSV loaded wholesale; used by the report stage.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Column index, or -1 when absent.
  int col(const std::string& name) const;
  // Like col but throws InputError naming the column and file.
  int require_col(const std::string& name, const std::string& file) const;
};

Table read_table(const std::string& path);

}  // namespace relosim::csv
