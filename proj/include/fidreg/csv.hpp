#pragma once

#include "fidreg/types.hpp"

#include <string>

namespace fidreg {

class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numeric CSV, comma separated, headered or headerless (auto-detected from
/// the first row). Every cell must parse as a finite double; NaN/inf and
/// ragged rows are rejected with the row and column in the message.
Matrix read_csv_matrix(const std::string& path);

/// Single-column CSV.
Vector read_csv_vector(const std::string& path);

}  // namespace fidreg
