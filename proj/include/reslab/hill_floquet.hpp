#pragma once

#include <vector>

#include <Eigen/Dense>

#include "reslab/modulation.hpp"
#include "reslab/ode.hpp"

namespace reslab {

struct HillState {
  Eigen::VectorXcd psi;
  Eigen::VectorXcd dpsi;
  double t = 0.0;
};

struct Monodromy {
  Eigen::MatrixXcd matrix;  // 2N x 2N, acting on (Psi, Psi')
  double period = 0.0;
  double determinant_error = 0.0;  // |det - 1|
};

struct Quasifrequencies {
  Eigen::VectorXcd values;       // Re folded into [0, Omega), sorted by (Re, Im)
  Eigen::VectorXcd multipliers;  // monodromy eigenvalues mu_j, same order
  double omega = 0.0;
  double eigenvector_condition = 1.0;
  bool defective = false;  // eigenvector condition above 1e10
};

// Advances Psi'' + M(t) Psi = 0 from state0.t to t1.
HillState integrate_hill(const MatrixFunction& m, const HillState& state0, double t1,
                         const OdeOptions& options);
HillState integrate_hill(const HillCoefficient& coeff, const HillState& state0, double t1,
                         double tol);

// Fundamental matrix over [0, period], one column per initial unit vector.
// Throws NumericalError when |det - 1| > det_tolerance.
Monodromy monodromy(const MatrixFunction& m, std::size_t n, double period,
                    const OdeOptions& options, double det_tolerance = 1e-8);
Monodromy monodromy(const HillCoefficient& coeff, double tol, double det_tolerance = 1e-8);

// omega_j = -i log(mu_j) / tau, principal branch, real part folded into [0, Omega).
Quasifrequencies quasifrequencies(const Monodromy& mono, double omega);

// Real part reduced into [0, omega).
double fold(double value, double omega);
// Distance between a and b on the circle R / (omega Z).
double circular_distance(double a, double b, double omega);

// +-sqrt(eig(M0)) sorted ascending. Throws InputError on a non-positive eigenvalue.
Eigen::VectorXd static_spectrum(const Eigen::MatrixXd& m0);

// c_i(t) = sqrt(kappa_i(t)) / rho_i(t) * Psi_i(t), sample by sample.
std::vector<Eigen::VectorXcd> c_from_psi(const ModulationProfile& profile,
                                         const std::vector<double>& times,
                                         const std::vector<Eigen::VectorXcd>& psi);
// Inverse map: Psi_i = rho_i / sqrt(kappa_i) * c_i.
std::vector<Eigen::VectorXcd> psi_from_c(const ModulationProfile& profile,
                                         const std::vector<double>& times,
                                         const std::vector<Eigen::VectorXcd>& c);

}  // namespace reslab
