#include "fidreg/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace fidreg {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_cell(const std::string& cell, double& out) {
  const std::string t = trim(cell);
  if (t.empty()) return false;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::vector<std::vector<double>> read_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CsvError("cannot open '" + path + "'");

  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  bool first_data_row = true;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const std::vector<std::string> cells = split_row(line);
    std::vector<double> row(cells.size());
    bool all_numeric = true;
    std::size_t bad_col = 0;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (!parse_cell(cells[c], row[c])) {
        all_numeric = false;
        bad_col = c;
        break;
      }
      if (!std::isfinite(row[c]))
        throw CsvError(path + ": non-finite value at row " + std::to_string(lineno) +
                       ", column " + std::to_string(c + 1));
    }
    if (!all_numeric) {
      if (first_data_row) {
        first_data_row = false;  // header row, skip it
        continue;
      }
      throw CsvError(path + ": unparseable cell at row " + std::to_string(lineno) +
                     ", column " + std::to_string(bad_col + 1));
    }
    if (rows.empty()) {
      width = row.size();
    } else if (row.size() != width) {
      throw CsvError(path + ": row " + std::to_string(lineno) + " has " +
                     std::to_string(row.size()) + " cells, expected " + std::to_string(width));
    }
    first_data_row = false;
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw CsvError(path + ": no numeric rows");
  return rows;
}

}  // namespace

Matrix read_csv_matrix(const std::string& path) {
  const auto rows = read_rows(path);
  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
  return m;
}

Vector read_csv_vector(const std::string& path) {
  const auto rows = read_rows(path);
  if (rows[0].size() != 1)
    throw CsvError(path + ": expected a single column, got " + std::to_string(rows[0].size()));
  Vector v(static_cast<Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) v[static_cast<Index>(i)] = rows[i][0];
  return v;
}

}  // namespace fidreg
