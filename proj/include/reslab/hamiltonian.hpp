#pragma once

#include <vector>

#include <Eigen/Dense>

#include "reslab/errors.hpp"
#include "reslab/modulation.hpp"

namespace reslab {

// Unique symmetric positive definite square root Q sqrt(D) Q^T. Throws
// InputError naming the offending eigenvalue when m is not SPD.
Eigen::MatrixXd sqrt_spd(const Eigen::MatrixXd& m);

// Static Hermitian form: T0 = diag(sqrt(M0), i Id), H0 = [[0, sqrt(M0)], [sqrt(M0), 0]].
struct StaticHamiltonian {
  Eigen::MatrixXd sqrt_m0;
  Eigen::MatrixXd h0;
  Eigen::MatrixXcd t0;

  std::size_t size() const { return static_cast<std::size_t>(sqrt_m0.rows()); }
};

StaticHamiltonian static_hamiltonian(const Eigen::MatrixXd& m0);

// Real unknowns of the first-order transform T1 (2N x 2N): upper triangular,
// real diagonal on positions 0..N-1, imaginary diagonal on N..2N-1. Entries
// outside the pattern are never stored, so they stay exactly zero.
class TransformAnsatz {
 public:
  struct Slot {
    int row;
    int col;
    bool imaginary;
  };

  explicit TransformAnsatz(std::size_t n);

  std::size_t resonators() const { return n_; }
  std::size_t size() const { return slots_.size(); }  // 4 N^2
  const std::vector<Slot>& slots() const { return slots_; }

  Eigen::MatrixXcd to_matrix(const Eigen::VectorXd& x) const;
  // True when m has no entries outside the ansatz pattern.
  bool conforms(const Eigen::MatrixXcd& m) const;

 private:
  std::size_t n_;
  std::vector<Slot> slots_;
};

// Real coordinates of the anti-Hermitian matrix K = X - X^H: (Re, Im) of the
// strict upper triangle and Im of the diagonal, 4 N^2 values for 2N x 2N.
Eigen::VectorXd anti_hermitian_coordinates(const Eigen::MatrixXcd& x);

// First-order Hamiltonian in the eigenbasis of M0 (sqrt_eig = sqrt of the
// eigenvalues), from T1', T1 and the rotated modulation M1:
//   H11 = i T1_1' S^-1 - i T1_2 S - S T1_3 S^-1
//   H12 = T1_2' + T1_1 + i S T1_4
//   H21 = i T1_3' S^-1 - i T1_4 S + M1 S^-1 - S T1_1 S^-1
//   H22 = T1_4' + T1_3 + i S T1_2
Eigen::MatrixXcd first_order_hamiltonian(const Eigen::VectorXd& sqrt_eig,
                                         const Eigen::MatrixXcd& dt1, const Eigen::MatrixXcd& t1,
                                         const Eigen::MatrixXd& m1_rotated);

struct TransformOptions {
  double tol = 1e-10;
  int grid = 2048;  // uniform intervals per period
};

// T1 sampled on a uniform grid over one period, in the eigenbasis of M0.
struct TransformTrajectory {
  std::vector<double> t;
  std::vector<Eigen::MatrixXcd> t1;
  std::vector<Eigen::MatrixXcd> dt1;  // exact time derivative from the ODE right-hand side
  Eigen::MatrixXd basis;              // Q with M0 = Q diag(eigenvalues) Q^T
  Eigen::VectorXd eigenvalues;
  double period = 0.0;

  std::size_t resonators() const { return static_cast<std::size_t>(basis.rows()); }
  double step() const { return t.size() > 1 ? t[1] - t[0] : 0.0; }
  // P X P^T with P = diag(Q, Q).
  Eigen::MatrixXcd to_original(const Eigen::MatrixXcd& x) const;
  // sup_t ||T1(t)||_F
  double max_norm() const;
};

// Solves B x' = A x + c(t), x(0) = 0, for the ansatz unknowns of T1 such that
// the first-order Hamiltonian is Hermitian. Throws InputError for a non-real
// M1 or non-SPD M0, NumericalError if B is singular.
TransformTrajectory solve_transform(const Eigen::MatrixXd& m0, const MatrixFunction& m1,
                                    double period, const TransformOptions& options = {});

struct HamiltonianTrajectory {
  std::vector<double> t;
  Eigen::MatrixXd h0;
  std::vector<Eigen::MatrixXcd> h1;         // first-order part, original basis
  std::vector<Eigen::MatrixXcd> h;          // H0 + epsilon H1
  std::vector<Eigen::MatrixXcd> generator;  // i (T' + T G(t)) T^-1 with T = T0 + epsilon T1
  double epsilon = 0.0;

  // sup_t ||G - G^H||_F of the exact transformed generator.
  double hermitian_residual() const;
  // sup_t max_j |G_jj|.
  double max_diagonal() const;
  // sup_t ||H - H^H||_F of the first-order Hamiltonian (solver-level only).
  double first_order_hermitian_residual() const;
  // sup_t max_j |Im (H1_12)_jj| over the off-diagonal blocks.
  double off_block_diagonal_imag() const;
};

HamiltonianTrajectory hamiltonian_trajectory(const Eigen::MatrixXd& m0, const MatrixFunction& m1,
                                             const TransformTrajectory& transform,
                                             double epsilon);

struct Reconstruction {
  std::vector<double> t;
  std::vector<Eigen::MatrixXd> m;  // recovered M(t)
  double top_left = 0.0;           // sup_t max |block 11|
  double top_right = 0.0;          // sup_t max |block 12 - Id|
};

// [[0, Id], [-M, 0]] = -i T^-1 (H T - i T') with T' from fourth-order
// differences of the stored samples. Throws NumericalError when cond(T) > 1e10.
Reconstruction reconstruct_M(const TransformTrajectory& transform,
                             const HamiltonianTrajectory& hamiltonian, double epsilon);

// N = 1 only. With T1 = [[a + ib, c + id], [e + if, g + ih]] the four scalar
// equations
//   a' = sqrt(m) f + m c,  h' = -f - sqrt(m) c,
//   c' = 2 sqrt(m) h + e' + M1 / sqrt(m) - 2a,  d' = f'
// are checked along the trajectory (derivatives by finite differences), as is
// H1 = [[0, s], [s, 0]] with s = sqrt(m) h + M1 / sqrt(m) - a.
struct OneResonatorResiduals {
  double a = 0.0, h = 0.0, c = 0.0, d = 0.0;
  double h1_form = 0.0;

  double max() const;
};

OneResonatorResiduals one_resonator_residuals(const TransformTrajectory& transform,
                                              const HamiltonianTrajectory& hamiltonian,
                                              const MatrixFunction& m1);

// Fourth-order finite-difference derivative of uniformly spaced samples
// (central inside, one-sided at the ends). Needs at least five samples.
template <class T>
std::vector<T> differentiate_uniform(const std::vector<T>& f, double h) {
  const std::size_t n = f.size();
  std::vector<T> d(n);
  if (n < 5) throw InputError("finite differences need at least five samples");
  const double s = 1.0 / (12.0 * h);
  d[0] = s * (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]);
  d[1] = s * (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]);
  for (std::size_t k = 2; k + 2 < n; ++k)
    d[k] = s * (f[k - 2] - 8.0 * f[k - 1] + 8.0 * f[k + 1] - f[k + 2]);
  d[n - 2] = s * (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] - f[n - 5]);
  d[n - 1] = s * (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4] + 3.0 * f[n - 5]);
  return d;
}

}  // namespace reslab
