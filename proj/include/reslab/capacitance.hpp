#pragma once

#include <iosfwd>
#include <span>

#include <Eigen/Dense>

#include "reslab/geometry.hpp"

namespace reslab {

// Collocation matrix of the single layer potential
//   S[phi](x) = -1/(4 pi) \int 1/|x-y| phi(y) dsigma(y)
// for piecewise-constant densities, collocated at panel centroids.
struct DenseOperator {
  Eigen::MatrixXd entries;
};

struct Density {
  Eigen::VectorXd panel_values;
  int resonator_index = 0;
  double residual = 0.0;  // max |S psi - chi| over collocation points
};

struct CapacitanceMatrix {
  Eigen::MatrixXd entries;
  int refinement = -1;     // -1 when not produced by the boundary element solver
  double residual = 0.0;   // max collocation residual over all densities
  double raw_asymmetry = 0.0;  // max |C_ij - C_ji| / max |C| before symmetrisation

  std::size_t size() const { return static_cast<std::size_t>(entries.rows()); }
};

// \int_T 1/|x - y| dA(y) over the flat triangle (a, b, c), in closed form.
// Valid for any x, including points in the triangle's plane.
double triangle_potential(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& x);

DenseOperator assemble_single_layer(const TriangleMesh& mesh);

// Solves S psi = chi_{dD_i}. Throws NumericalError when the condition
// estimate exceeds 1e12.
Density solve_density(const DenseOperator& op, const TriangleMesh& mesh, int resonator);

// C_ij = -\int_{dD_i} psi_j, symmetrised after the raw asymmetry has been
// checked against max_raw_asymmetry.
CapacitanceMatrix capacitance_matrix(const ResonatorSystem& system, int refinement,
                                     double max_raw_asymmetry = 5e-2);

// Capacitance of a single sphere: 4 pi R.
double cap_B(double radius);
// Same quantity from the boundary element solver at the given refinement.
double cap_B_bem(double radius, int refinement);

// Leading-order dilute capacitance:
//   C_ii = capB,  C_ij = -eta capB^2 / (4 pi |z_i - z_j|).
CapacitanceMatrix dilute_capacitance(std::span<const Vec3> rescaled_centers, double eta,
                                     double capB);

// "# capacitance N=<N> refinement=<r>" header, then N comma-separated rows.
void write_capacitance_csv(const CapacitanceMatrix& c, std::ostream& os);
CapacitanceMatrix read_capacitance_csv(std::istream& is);

}  // namespace reslab
