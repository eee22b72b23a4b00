#include "reslab/csv.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "reslab/errors.hpp"

namespace reslab {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_row(std::ostream& os, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) os << ',';
    os << fields[i];
  }
  os << '\n';
}

void write_row(std::ostream& os, const std::vector<double>& values) {
  std::vector<std::string> f;
  f.reserve(values.size());
  for (double v : values) f.push_back(fmt(v));
  write_row(os, f);
}

void write_matrix_rows(std::ostream& os, const Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::vector<double> row(m.cols());
    for (Eigen::Index j = 0; j < m.cols(); ++j) row[j] = m(i, j);
    write_row(os, row);
  }
}

Eigen::MatrixXd read_matrix_rows(std::istream& is, long rows, long cols) {
  Eigen::MatrixXd m(rows, cols);
  std::string line;
  long r = 0;
  while (r < rows && std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string cell;
    long c = 0;
    while (std::getline(ls, cell, ',')) {
      if (c >= cols) throw InputError("too many columns in CSV row " + std::to_string(r));
      try {
        m(r, c++) = std::stod(cell);
      } catch (const std::exception&) {
        throw InputError("bad number '" + cell + "' in CSV row " + std::to_string(r));
      }
    }
    if (c != cols) throw InputError("too few columns in CSV row " + std::to_string(r));
    ++r;
  }
  if (r != rows) throw InputError("expected " + std::to_string(rows) + " CSV rows");
  return m;
}

std::vector<double> flatten_complex(const Eigen::MatrixXcd& m) {
  std::vector<double> out;
  out.reserve(2 * m.size());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      out.push_back(m(i, j).real());
      out.push_back(m(i, j).imag());
    }
  return out;
}

}  // namespace reslab
