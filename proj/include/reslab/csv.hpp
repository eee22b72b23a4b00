#pragma once

#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace reslab {

// Round-trip decimal formatting ("%.17g"); identical bits give identical text.
std::string fmt(double v);

// Comma-joined fields followed by '\n'.
void write_row(std::ostream& os, const std::vector<std::string>& fields);
void write_row(std::ostream& os, const std::vector<double>& values);

void write_matrix_rows(std::ostream& os, const Eigen::MatrixXd& m);
// Reads `rows` lines of `cols` comma-separated values, skipping '#' lines.
Eigen::MatrixXd read_matrix_rows(std::istream& is, long rows, long cols);

// Row-major real/imaginary pairs: re(0,0), im(0,0), re(0,1), ...
std::vector<double> flatten_complex(const Eigen::MatrixXcd& m);

}  // namespace reslab
