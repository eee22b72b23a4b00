#pragma once

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "reslab/capacitance.hpp"
#include "reslab/geometry.hpp"

namespace reslab {

using MatrixFunction = std::function<Eigen::MatrixXd(double)>;

// Truncated Fourier series sum_{n=-M}^{M} c_n e^{i n Omega t} with Hermitian
// coefficients, so its values are real.
class FourierSeries {
 public:
  FourierSeries() = default;
  // coefficients[k] holds c_{k-M}; size must be odd.
  FourierSeries(std::vector<std::complex<double>> coefficients, double omega);

  static FourierSeries constant(double value, double omega);

  int order() const { return static_cast<int>(coeffs_.size() / 2); }
  double omega() const { return omega_; }
  std::complex<double> coefficient(int n) const;
  const std::vector<std::complex<double>>& coefficients() const { return coeffs_; }

  // k-th time derivative of the complex sum at t (k = 0 is the value).
  std::complex<double> evaluate_complex(double t, int derivative = 0) const;
  // Real part; the imaginary part is roundoff by construction.
  double operator()(double t, int derivative = 0) const;

 private:
  std::vector<std::complex<double>> coeffs_{1.0};
  double omega_ = 1.0;
};

// Modulated material profile. Each series is stored by its shape: the
// evaluated series is 1 + epsilon * sum_{n != 0} c_n e^{i n Omega t}.
struct ModulationProfile {
  std::vector<FourierSeries> rho_inv;    // shapes of 1/rho_i(t)
  std::vector<FourierSeries> kappa_inv;  // shapes of 1/kappa_i(t)
  double epsilon = 0.0;
  double omega = 1.0;

  // Unmodulated profile for n resonators.
  static ModulationProfile static_profile(std::size_t n, double omega);

  std::size_t size() const { return rho_inv.size(); }
  double period() const;
  ModulationProfile with_epsilon(double eps) const;
  // Checks shared Omega, zero-mode normalisation and sizes; throws InputError.
  void validate() const;

  // 1 + epsilon * (non-constant part) and its time derivatives.
  double rho_inv_value(std::size_t i, double t, int derivative = 0) const;
  double kappa_inv_value(std::size_t i, double t, int derivative = 0) const;
};

struct MaterialState {
  double rho = 1.0;
  double kappa = 1.0;
  double dkappa = 0.0;
  double d2kappa = 0.0;
};

// rho_i, kappa_i, kappa_i', kappa_i'' at t, differentiating the 1/kappa
// series analytically. Throws NumericalError("modulation degenerate ...")
// when |1/kappa_i| or |1/rho_i| drops below 1e-8.
MaterialState eval_material(const ModulationProfile& profile, std::size_t i, double t);

struct WDiagonals {
  Eigen::VectorXd w1, w2, w3;
};

// (W1)_ii = sqrt(kappa_i) rho_i / |D_i|, (W2)_ii = sqrt(kappa_i) / rho_i,
// (W3)_ii = sqrt(kappa_i)/2 * d/dt (kappa_i' / kappa_i^{3/2}).
WDiagonals assemble_W(const ModulationProfile& profile, const Eigen::VectorXd& volumes, double t);

// Coefficient M(t) of the Hill system Psi'' + M(t) Psi = 0.
class HillCoefficient {
 public:
  HillCoefficient(Eigen::MatrixXd capacitance, ModulationProfile profile, Materials materials,
                  Eigen::VectorXd volumes);
  HillCoefficient(const CapacitanceMatrix& capacitance, ModulationProfile profile,
                  const ResonatorSystem& system);

  std::size_t size() const { return static_cast<std::size_t>(capacitance_.rows()); }
  const Eigen::MatrixXd& capacitance() const { return capacitance_; }
  const ModulationProfile& profile() const { return profile_; }
  const Materials& materials() const { return materials_; }
  const Eigen::VectorXd& volumes() const { return volumes_; }
  double period() const { return profile_.period(); }
  double omega() const { return profile_.omega; }
  double epsilon() const { return profile_.epsilon; }

  HillCoefficient with_epsilon(double eps) const;

  // M^0_ij = delta kappa_r C_ij / (rho_r |D_i|).
  Eigen::MatrixXd static_matrix() const;
  // M(t) = (delta kappa_r / rho_r) W1 C W2 + W3.
  Eigen::MatrixXd operator()(double t) const;

 private:
  Eigen::MatrixXd capacitance_;
  ModulationProfile profile_;
  Materials materials_;
  Eigen::VectorXd volumes_;
};

Eigen::MatrixXd assemble_M(const HillCoefficient& coeff, double t);

// M(t) = M0 + epsilon M1(t), with M1 = (M(t) - M0) / epsilon (zero at epsilon = 0).
struct SplitM {
  Eigen::MatrixXd m0;
  MatrixFunction m1;
  double epsilon = 0.0;
};

SplitM split_M(const HillCoefficient& coeff);

// sup_t ||M1|| at epsilon and at epsilon / 2 over `samples` points of one
// period, and their ratio (close to 1 when the first-order term dominates).
struct FirstOrderCheck {
  double sup_m1 = 0.0;
  double sup_m1_half = 0.0;
  double ratio = 1.0;
};
FirstOrderCheck first_order_check(const HillCoefficient& coeff, int samples = 256);

}  // namespace reslab
