#include "reslab/hamiltonian.hpp"

#include <cmath>
#include <complex>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "reslab/errors.hpp"
#include "reslab/ode.hpp"

namespace reslab {

using cd = std::complex<double>;
constexpr cd kI(0.0, 1.0);

namespace {

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> spd_eigen(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || m.rows() == 0) throw InputError("matrix must be square");
  const double scale = std::max(m.cwiseAbs().maxCoeff(), 1e-300);
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw InputError("matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()));
  if (es.info() != Eigen::Success) throw NumericalError("symmetric eigensolve failed");
  for (Eigen::Index k = 0; k < m.rows(); ++k) {
    if (!(es.eigenvalues()[k] > 0.0)) {
      std::ostringstream msg;
      msg << "matrix is not positive definite: eigenvalue " << k << " = " << es.eigenvalues()[k];
      throw InputError(msg.str());
    }
  }
  return es;
}

Eigen::MatrixXcd block_diag(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

}  // namespace

Eigen::MatrixXd sqrt_spd(const Eigen::MatrixXd& m) {
  const auto es = spd_eigen(m);
  const Eigen::MatrixXd& q = es.eigenvectors();
  const Eigen::MatrixXd s = q * es.eigenvalues().cwiseSqrt().asDiagonal() * q.transpose();
  return 0.5 * (s + s.transpose());
}

StaticHamiltonian static_hamiltonian(const Eigen::MatrixXd& m0) {
  StaticHamiltonian s;
  s.sqrt_m0 = sqrt_spd(m0);
  const auto n = m0.rows();
  s.h0 = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  s.h0.topRightCorner(n, n) = s.sqrt_m0;
  s.h0.bottomLeftCorner(n, n) = s.sqrt_m0;
  s.t0 = block_diag(s.sqrt_m0.cast<cd>(), kI * Eigen::MatrixXcd::Identity(n, n));

  // Off-diagonal blocks multiply back to M0.
  const Eigen::MatrixXd product = s.h0.topRightCorner(n, n) * s.h0.bottomLeftCorner(n, n);
  const double scale = m0.cwiseAbs().maxCoeff();
  if ((product - m0).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw NumericalError("static Hamiltonian blocks do not reproduce M0");
  return s;
}

TransformAnsatz::TransformAnsatz(std::size_t n) : n_(n) {
  const int dim = static_cast<int>(2 * n);
  for (int r = 0; r < dim; ++r) {
    slots_.push_back({r, r, r >= static_cast<int>(n)});
    for (int c = r + 1; c < dim; ++c) {
      slots_.push_back({r, c, false});
      slots_.push_back({r, c, true});
    }
  }
}

Eigen::MatrixXcd TransformAnsatz::to_matrix(const Eigen::VectorXd& x) const {
  const auto dim = static_cast<Eigen::Index>(2 * n_);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t k = 0; k < slots_.size(); ++k) {
    const Slot& s = slots_[k];
    m(s.row, s.col) += s.imaginary ? cd(0.0, x[static_cast<Eigen::Index>(k)])
                                   : cd(x[static_cast<Eigen::Index>(k)], 0.0);
  }
  return m;
}

bool TransformAnsatz::conforms(const Eigen::MatrixXcd& m) const {
  const auto dim = static_cast<Eigen::Index>(2 * n_);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      const cd v = m(r, c);
      if (r > c && v != cd(0.0)) return false;
      if (r == c && r < static_cast<Eigen::Index>(n_) && v.imag() != 0.0) return false;
      if (r == c && r >= static_cast<Eigen::Index>(n_) && v.real() != 0.0) return false;
    }
  }
  return true;
}

Eigen::VectorXd anti_hermitian_coordinates(const Eigen::MatrixXcd& x) {
  const Eigen::MatrixXcd k = x - x.adjoint();
  const auto dim = k.rows();
  Eigen::VectorXd out(dim * dim);
  Eigen::Index idx = 0;
  for (Eigen::Index r = 0; r < dim; ++r) {
    out[idx++] = k(r, r).imag();
    for (Eigen::Index c = r + 1; c < dim; ++c) {
      out[idx++] = k(r, c).real();
      out[idx++] = k(r, c).imag();
    }
  }
  return out;
}

Eigen::MatrixXcd first_order_hamiltonian(const Eigen::VectorXd& sqrt_eig,
                                         const Eigen::MatrixXcd& dt1, const Eigen::MatrixXcd& t1,
                                         const Eigen::MatrixXd& m1_rotated) {
  const auto n = sqrt_eig.size();
  const Eigen::MatrixXcd s = sqrt_eig.cast<cd>().asDiagonal();
  const Eigen::MatrixXcd si = sqrt_eig.cwiseInverse().cast<cd>().asDiagonal();
  auto blk = [n](const Eigen::MatrixXcd& m, int i, int j) { return m.block(i * n, j * n, n, n); };
  Eigen::MatrixXcd h(2 * n, 2 * n);
  h.topLeftCorner(n, n) = kI * blk(dt1, 0, 0) * si - kI * blk(t1, 0, 1) * s - s * blk(t1, 1, 0) * si;
  h.topRightCorner(n, n) = blk(dt1, 0, 1) + blk(t1, 0, 0) + kI * s * blk(t1, 1, 1);
  h.bottomLeftCorner(n, n) = kI * blk(dt1, 1, 0) * si - kI * blk(t1, 1, 1) * s +
                             m1_rotated.cast<cd>() * si - s * blk(t1, 0, 0) * si;
  h.bottomRightCorner(n, n) = blk(dt1, 1, 1) + blk(t1, 1, 0) + kI * s * blk(t1, 0, 1);
  return h;
}

Eigen::MatrixXcd TransformTrajectory::to_original(const Eigen::MatrixXcd& x) const {
  const Eigen::MatrixXcd q = basis.cast<cd>();
  const Eigen::MatrixXcd p = block_diag(q, q);
  return p * x * p.transpose();
}

double TransformTrajectory::max_norm() const {
  double m = 0.0;
  for (const auto& x : t1) m = std::max(m, x.norm());
  return m;
}

TransformTrajectory solve_transform(const Eigen::MatrixXd& m0, const MatrixFunction& m1,
                                    double period, const TransformOptions& options) {
  if (!(period > 0.0) || !std::isfinite(period)) throw InputError("period must be positive");
  if (options.grid < 4) throw InputError("transform grid needs at least 4 intervals");
  const auto es = spd_eigen(m0);
  const auto n = m0.rows();

  TransformTrajectory out;
  out.basis = es.eigenvectors();
  out.eigenvalues = es.eigenvalues();
  out.period = period;
  const Eigen::VectorXd sqrt_eig = out.eigenvalues.cwiseSqrt();
  const Eigen::MatrixXd q = out.basis;

  const TransformAnsatz ansatz(static_cast<std::size_t>(n));
  const auto dof = static_cast<Eigen::Index>(ansatz.size());
  const Eigen::MatrixXcd zero = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  const Eigen::MatrixXd zero_m1 = Eigen::MatrixXd::Zero(n, n);

  // Columns of B (coefficients of x') and A (coefficients of x) in the
  // Hermitianity conditions, obtained by probing each ansatz direction.
  Eigen::MatrixXd b(dof, dof), a(dof, dof);
  for (Eigen::Index k = 0; k < dof; ++k) {
    const Eigen::MatrixXcd e = ansatz.to_matrix(Eigen::VectorXd::Unit(dof, k));
    b.col(k) = anti_hermitian_coordinates(first_order_hamiltonian(sqrt_eig, e, zero, zero_m1));
    a.col(k) = anti_hermitian_coordinates(first_order_hamiltonian(sqrt_eig, zero, e, zero_m1));
  }
  const Eigen::FullPivLU<Eigen::MatrixXd> b_lu(b);
  if (!b_lu.isInvertible() || b_lu.rank() != dof)
    throw NumericalError("derivative coefficient matrix B is singular");
  const Eigen::MatrixXd b_inv = b_lu.inverse();
  const Eigen::MatrixXd drift = -b_inv * a;

  auto forcing = [&](double t) {
    const Eigen::MatrixXd raw = m1(t);
    if (raw.rows() != n || raw.cols() != n) throw InputError("M1(t) has the wrong dimension");
    if (!raw.allFinite()) throw InputError("M1(t) is not finite");
    const Eigen::MatrixXd rotated = q.transpose() * raw * q;
    return Eigen::VectorXd(-b_inv * anti_hermitian_coordinates(
                                         first_order_hamiltonian(sqrt_eig, zero, zero, rotated)));
  };
  auto rhs = [&](double t, const Eigen::VectorXd& x) {
    return Eigen::VectorXd(drift * x + forcing(t));
  };

  const int grid = options.grid;
  const double h = period / grid;
  out.t.resize(static_cast<std::size_t>(grid) + 1);
  out.t1.resize(out.t.size());
  out.dt1.resize(out.t.size());

  OdeOptions ode;
  ode.tol = options.tol;
  OdeStats stats;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(dof);
  for (int k = 0; k <= grid; ++k) {
    const double tk = k == grid ? period : k * h;
    if (k > 0) {
      ode.initial_step = stats.last_step;
      x = integrate_ode(rhs, out.t[static_cast<std::size_t>(k - 1)], x, tk, ode, &stats);
    }
    out.t[static_cast<std::size_t>(k)] = tk;
    out.t1[static_cast<std::size_t>(k)] = ansatz.to_matrix(x);
    out.dt1[static_cast<std::size_t>(k)] = ansatz.to_matrix(rhs(tk, x));
  }
  return out;
}

HamiltonianTrajectory hamiltonian_trajectory(const Eigen::MatrixXd& m0, const MatrixFunction& m1,
                                             const TransformTrajectory& transform,
                                             double epsilon) {
  const auto n = m0.rows();
  if (static_cast<Eigen::Index>(transform.resonators()) != n)
    throw InputError("transform and M0 dimensions differ");
  const StaticHamiltonian stat = static_hamiltonian(m0);
  const Eigen::VectorXd sqrt_eig = transform.eigenvalues.cwiseSqrt();
  const Eigen::MatrixXd& q = transform.basis;

  // Static pieces in the solve basis.
  Eigen::MatrixXcd t0 = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  t0.topLeftCorner(n, n) = sqrt_eig.cast<cd>().asDiagonal();
  t0.bottomRightCorner(n, n) = kI * Eigen::MatrixXcd::Identity(n, n);
  Eigen::MatrixXcd h0_rot = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  h0_rot.topRightCorner(n, n) = sqrt_eig.cast<cd>().asDiagonal();
  h0_rot.bottomLeftCorner(n, n) = sqrt_eig.cast<cd>().asDiagonal();

  HamiltonianTrajectory out;
  out.t = transform.t;
  out.h0 = stat.h0;
  out.epsilon = epsilon;
  const std::size_t samples = transform.t.size();
  out.h1.resize(samples);
  out.h.resize(samples);
  out.generator.resize(samples);
  for (std::size_t k = 0; k < samples; ++k) {
    const Eigen::MatrixXd m1_rot = q.transpose() * m1(transform.t[k]) * q;
    const Eigen::MatrixXcd h1 =
        first_order_hamiltonian(sqrt_eig, transform.dt1[k], transform.t1[k], m1_rot);
    out.h1[k] = transform.to_original(h1);
    out.h[k] = transform.to_original(h0_rot + epsilon * h1);

    Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
    g.topRightCorner(n, n) = Eigen::MatrixXcd::Identity(n, n);
    Eigen::MatrixXd m_rot = epsilon * m1_rot;
    m_rot.diagonal() += transform.eigenvalues;
    g.bottomLeftCorner(n, n) = -m_rot.cast<cd>();
    const Eigen::MatrixXcd t = t0 + epsilon * transform.t1[k];
    const Eigen::MatrixXcd dt = epsilon * transform.dt1[k];
    const Eigen::MatrixXcd gen = kI * (dt + t * g) * t.partialPivLu().inverse();
    out.generator[k] = transform.to_original(gen);
  }
  return out;
}

double HamiltonianTrajectory::hermitian_residual() const {
  double r = 0.0;
  for (const auto& g : generator) r = std::max(r, (g - g.adjoint()).norm());
  return r;
}

double HamiltonianTrajectory::max_diagonal() const {
  double r = 0.0;
  for (const auto& g : generator) r = std::max(r, g.diagonal().cwiseAbs().maxCoeff());
  return r;
}

double HamiltonianTrajectory::first_order_hermitian_residual() const {
  double r = 0.0;
  for (const auto& x : h) r = std::max(r, (x - x.adjoint()).norm());
  return r;
}

double HamiltonianTrajectory::off_block_diagonal_imag() const {
  double r = 0.0;
  for (const auto& x : h1) {
    const auto n = x.rows() / 2;
    r = std::max(r, x.topRightCorner(n, n).diagonal().imag().cwiseAbs().maxCoeff());
    r = std::max(r, x.bottomLeftCorner(n, n).diagonal().imag().cwiseAbs().maxCoeff());
  }
  return r;
}

Reconstruction reconstruct_M(const TransformTrajectory& transform,
                             const HamiltonianTrajectory& hamiltonian, double epsilon) {
  const std::size_t samples = transform.t.size();
  if (hamiltonian.h.size() != samples) throw InputError("trajectory sample counts differ");
  const auto n = static_cast<Eigen::Index>(transform.resonators());
  const Eigen::VectorXd sqrt_eig = transform.eigenvalues.cwiseSqrt();
  Eigen::MatrixXcd t0 = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  t0.topLeftCorner(n, n) = sqrt_eig.cast<cd>().asDiagonal();
  t0.bottomRightCorner(n, n) = kI * Eigen::MatrixXcd::Identity(n, n);

  std::vector<Eigen::MatrixXcd> t(samples);
  for (std::size_t k = 0; k < samples; ++k)
    t[k] = transform.to_original(t0 + epsilon * transform.t1[k]);
  const std::vector<Eigen::MatrixXcd> dt = differentiate_uniform(t, transform.step());

  Reconstruction out;
  out.t = transform.t;
  out.m.resize(samples);
  for (std::size_t k = 0; k < samples; ++k) {
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(t[k]);
    const auto& sv = svd.singularValues();
    const double cond = sv[sv.size() - 1] > 0.0 ? sv[0] / sv[sv.size() - 1] : INFINITY;
    if (!(cond <= 1e10)) {
      std::ostringstream msg;
      msg << "transform is ill-conditioned at t = " << transform.t[k] << " (cond " << cond << ")";
      throw NumericalError(msg.str());
    }
    const Eigen::MatrixXcd g =
        -kI * t[k].partialPivLu().solve(hamiltonian.h[k] * t[k] - kI * dt[k]);
    out.m[k] = -g.bottomLeftCorner(n, n).real();
    out.top_left = std::max(out.top_left, g.topLeftCorner(n, n).cwiseAbs().maxCoeff());
    out.top_right = std::max(
        out.top_right,
        (g.topRightCorner(n, n) - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff());
  }
  return out;
}

double OneResonatorResiduals::max() const { return std::max({a, h, c, d, h1_form}); }

OneResonatorResiduals one_resonator_residuals(const TransformTrajectory& transform,
                                              const HamiltonianTrajectory& hamiltonian,
                                              const MatrixFunction& m1) {
  if (transform.resonators() != 1) throw InputError("one-resonator residuals need N = 1");
  const double m = transform.eigenvalues[0];
  const double s = std::sqrt(m);
  const std::size_t samples = transform.t.size();
  std::vector<double> a(samples), c(samples), d(samples), e(samples), f(samples), h(samples);
  for (std::size_t k = 0; k < samples; ++k) {
    const auto& x = transform.t1[k];
    a[k] = x(0, 0).real();
    c[k] = x(0, 1).real();
    d[k] = x(0, 1).imag();
    e[k] = x(1, 0).real();
    f[k] = x(1, 0).imag();
    h[k] = x(1, 1).imag();
  }
  const double step = transform.step();
  const auto da = differentiate_uniform(a, step);
  const auto dc = differentiate_uniform(c, step);
  const auto dd = differentiate_uniform(d, step);
  const auto de = differentiate_uniform(e, step);
  const auto df = differentiate_uniform(f, step);
  const auto dh = differentiate_uniform(h, step);

  OneResonatorResiduals r;
  for (std::size_t k = 0; k < samples; ++k) {
    const double m1k = m1(transform.t[k])(0, 0);
    r.a = std::max(r.a, std::abs(da[k] - (s * f[k] + m * c[k])));
    r.h = std::max(r.h, std::abs(dh[k] - (-f[k] - s * c[k])));
    r.c = std::max(r.c, std::abs(dc[k] - (2.0 * s * h[k] + de[k] + m1k / s - 2.0 * a[k])));
    r.d = std::max(r.d, std::abs(dd[k] - df[k]));
    const double off = s * h[k] + m1k / s - a[k];
    Eigen::Matrix2cd expected;
    expected << 0.0, off, off, 0.0;
    r.h1_form = std::max(r.h1_form, (hamiltonian.h1[k] - expected).cwiseAbs().maxCoeff());
  }
  return r;
}

}  // namespace reslab
