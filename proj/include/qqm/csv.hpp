#pragma once

// CSV dialect: comma separated, '.' decimal, scientific notation with 17
// significant digits, mandatory header row. Lines starting with '#' are
// comments.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "qqm/hilbert.hpp"

namespace qqm {

/// "%.16e": round-trips every double.
std::string format_double(double v);

/// Header then one row per node: x, x0, x1, x2, x3.
void write_qfunction_csv(std::ostream& out, const QFunction& f);
void write_qfunction_csv(const std::filesystem::path& path, const QFunction& f);

/// Reads the x, x0..x3 layout. The node column must match the uniform grid.
QFunction read_qfunction_csv(std::istream& in, const std::string& source = "<stream>");
QFunction read_qfunction_csv(const std::filesystem::path& path);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  /// Index of a named column; throws ConfigError when absent.
  std::size_t column(const std::string& name) const;
};

CsvTable read_csv(std::istream& in, const std::string& source = "<stream>");
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace qqm
