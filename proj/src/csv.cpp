#include "relosim/csv.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "relosim/errors.hpp"

namespace relosim::csv {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(current);
      current.clear();
    } else if (c != '\r') {
      current.push_back(c);
    }
  }
  fields.push_back(current);
  return fields;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

std::int64_t parse_i64(const std::string& field, const std::string& context) {
  if (field.empty()) throw InputError(context + ": empty integer field");
  errno = 0;
  char* end = nullptr;
  long long v = std::strtoll(field.c_str(), &end, 10);
  if (errno != 0 || end != field.c_str() + field.size())
    throw InputError(context + ": not an integer: '" + field + "'");
  return static_cast<std::int64_t>(v);
}

double parse_double(const std::string& field, const std::string& context) {
  if (field.empty()) throw InputError(context + ": empty numeric field");
  errno = 0;
  char* end = nullptr;
  double v = std::strtod(field.c_str(), &end);
  if (errno != 0 || end != field.c_str() + field.size())
    throw InputError(context + ": not a number: '" + field + "'");
  return v;
}

std::string join(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out.push_back(',');
    out += fields[i];
  }
  return out;
}

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

int Table::col(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

int Table::require_col(const std::string& name, const std::string& file) const {
  const int c = col(name);
  if (c < 0) throw InputError(file + ": missing required column '" + name + "'");
  return c;
}

Table read_table(const std::string& path) {
  const std::vector<std::string> lines = read_lines(path);
  Table t;
  if (lines.empty()) throw InputError(path + ": empty file (expected a header row)");
  t.header = split(lines.front());
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::vector<std::string> row = split(lines[i]);
    if (row.size() != t.header.size())
      throw InputError(path + ": row " + std::to_string(i + 1) + " has " +
                       std::to_string(row.size()) + " fields, header has " +
                       std::to_string(t.header.size()));
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace relosim::csv
