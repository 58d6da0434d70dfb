#include "qqm/csv.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "qqm/errors.hpp"

namespace qqm {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

void write_qfunction_csv(std::ostream& out, const QFunction& f) {
  out << "x,x0,x1,x2,x3\n";
  for (std::size_t k = 0; k < f.size(); ++k) {
    const auto& q = f[k];
    out << format_double(f.grid().node(k)) << ',' << format_double(q.x0) << ','
        << format_double(q.x1) << ',' << format_double(q.x2) << ',' << format_double(q.x3)
        << '\n';
  }
}

void write_qfunction_csv(const std::filesystem::path& path, const QFunction& f) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  write_qfunction_csv(out, f);
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    cells.push_back(b == std::string::npos ? std::string{} : cell.substr(b, e - b + 1));
  }
  return cells;
}

}  // namespace

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == name) return c;
  }
  throw ConfigError("CSV has no column '" + name + "'");
}

CsvTable read_csv(std::istream& in, const std::string& source) {
  CsvTable t;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#' || line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    auto cells = split(line);
    if (t.header.empty()) {
      t.header = std::move(cells);
      continue;
    }
    if (cells.size() != t.header.size()) {
      throw ConfigError(source + ":" + std::to_string(lineno) + ": expected " +
                        std::to_string(t.header.size()) + " columns, got " +
                        std::to_string(cells.size()));
    }
    std::vector<double> row(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      char* end = nullptr;
      row[c] = std::strtod(cells[c].c_str(), &end);
      if (end == cells[c].c_str() || *end != '\0') {
        throw ConfigError(source + ":" + std::to_string(lineno) + ": bad number '" + cells[c] +
                          "'");
      }
    }
    t.rows.push_back(std::move(row));
  }
  if (t.header.empty()) throw ConfigError(source + ": missing header row");
  return t;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  return read_csv(in, path.string());
}

QFunction read_qfunction_csv(std::istream& in, const std::string& source) {
  const CsvTable t = read_csv(in, source);
  const std::size_t cx = t.column("x");
  const std::size_t c0 = t.column("x0"), c1 = t.column("x1"), c2 = t.column("x2"),
                    c3 = t.column("x3");
  const Grid grid(t.rows.size());
  std::vector<Quaternion> values(t.rows.size());
  for (std::size_t k = 0; k < t.rows.size(); ++k) {
    const auto& r = t.rows[k];
    if (std::fabs(r[cx] - grid.node(k)) > 1e-9) {
      throw ConfigError(source + ": row " + std::to_string(k) +
                        " node does not match the uniform periodic grid");
    }
    values[k] = {r[c0], r[c1], r[c2], r[c3]};
  }
  return QFunction(grid, std::move(values));
}

QFunction read_qfunction_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  return read_qfunction_csv(in, path.string());
}

}  // namespace qqm
