#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "specfun/io.hpp"

namespace specfun::io {
namespace {

bool parse_double(std::string_view token, double& out) {
  while (!token.empty() && (token.front() == ' ' || token.front() == '\t')) token.remove_prefix(1);
  while (!token.empty() && (token.back() == ' ' || token.back() == '\t' || token.back() == '\r')) {
    token.remove_suffix(1);
  }
  if (token.empty()) return false;
  if (token.front() == '+') token.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc() && ptr == token.data() + token.size();
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  for (char c : line) {
    if (c == ',' || c == ' ' || c == '\t' || c == ';') {
      if (!current.empty()) fields.push_back(current);
      current.clear();
    } else if (c != '\r') {
      current.push_back(c);
    }
  }
  if (!current.empty()) fields.push_back(current);
  return fields;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ec == std::errc() ? ptr : buf);
}

void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
  if (header.size() != columns.size()) {
    throw Error(ErrorCode::ShapeMismatch, "CSV header and column count differ");
  }
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (const auto& c : columns) {
    if (c.size() != rows) throw Error(ErrorCode::ShapeMismatch, "CSV columns have unequal length");
  }
  for (std::size_t j = 0; j < header.size(); ++j) out << (j ? "," : "") << header[j];
  out << '\n';
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < columns.size(); ++j) out << (j ? "," : "") << format_double(columns[j][i]);
    out << '\n';
  }
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::MissingFile, "cannot open " + path.string() + " for writing");
  write_csv(out, header, columns);
}

std::vector<double> read_value_column(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MissingFile, "cannot open " + path.string());
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = split_fields(line);
    if (fields.empty() || fields.front().starts_with("#")) continue;
    double v = 0.0;
    if (!parse_double(fields.back(), v)) {
      if (values.empty() && line_no == 1) continue;  // header
      throw Error(ErrorCode::ConfigParse, path.string() + ":" + std::to_string(line_no) + ": not a number");
    }
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::NonFiniteValue, path.string() + ":" + std::to_string(line_no));
    }
    values.push_back(v);
  }
  return values;
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> values;
  for (const auto& field : split_fields(text)) {
    double v = 0.0;
    if (!parse_double(field, v)) throw Error(ErrorCode::ConfigParse, "not a number: '" + field + "'");
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteValue, "non-finite value in list");
    values.push_back(v);
  }
  return values;
}

void write_coordinate(std::ostream& out, const linalg::SymMatrix& a) {
  for (std::size_t j = 0; j < a.size(); ++j)
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a(i, j) != 0.0) out << i << ' ' << j << ' ' << format_double(a(i, j)) << '\n';
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::MissingFile, "cannot open " + path.string() + " for writing");
  out << text;
}

}  // namespace specfun::io
