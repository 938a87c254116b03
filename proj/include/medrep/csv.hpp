#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace medrep::csv {

struct Row {
  std::size_t line = 0;  // 1-based source line
  std::vector<std::string> fields;
};

// RFC 4180-style reader: comma separated, optional double-quoted fields with
// "" escapes, LF or CRLF line endings. Blank lines are skipped. Unquoted
// fields are trimmed of surrounding spaces.
std::vector<Row> parse(std::string_view text, const std::string& source);

std::string escape(std::string_view field);

std::string join(const std::vector<std::string>& fields);

// Fixed-point rendering with `decimals` digits; "-0.000" is printed as "0.000".
std::string format_fixed(double value, int decimals);

// Shortest representation that round-trips to the same double.
std::string format_exact(double value);

long parse_integer(const std::string& field, const std::string& source, std::size_t line,
                   const std::string& column);
double parse_real(const std::string& field, const std::string& source, std::size_t line,
                  const std::string& column);

std::string read_file(const std::filesystem::path& path);

}  // namespace medrep::csv
