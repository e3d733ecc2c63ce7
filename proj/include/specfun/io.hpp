#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "specfun/linalg.hpp"

namespace specfun::io {

// Shortest text that round-trips the double exactly.
std::string format_double(double v);

// CSV with a mandatory header row; all columns must have equal length.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);
void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);

// Reads the last column of a numeric CSV / whitespace file. A first line that
// does not parse as numbers is treated as a header. Throws MissingFile,
// NonFiniteValue or ConfigParse.
std::vector<double> read_value_column(const std::filesystem::path& path);

// Parses "1, 2.5, -3" (commas and/or whitespace). Throws ConfigParse or NonFiniteValue.
std::vector<double> parse_number_list(const std::string& text);

// Coordinate format: one "row col value" line per nonzero (0-based indices).
void write_coordinate(std::ostream& out, const linalg::SymMatrix& a);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace specfun::io
