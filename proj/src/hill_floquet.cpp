#include "reslab/hill_floquet.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "reslab/errors.hpp"
#include "reslab/parallel.hpp"

namespace reslab {

using cd = std::complex<double>;

HillState integrate_hill(const MatrixFunction& m, const HillState& state0, double t1,
                         const OdeOptions& options) {
  const auto n = state0.psi.size();
  if (state0.dpsi.size() != n) throw InputError("Psi and Psi' dimensions differ");
  if (!state0.psi.allFinite() || !state0.dpsi.allFinite()) throw InputError("non-finite state");
  Eigen::VectorXcd y(2 * n);
  y << state0.psi, state0.dpsi;
  auto rhs = [&](double t, const Eigen::VectorXcd& s) {
    Eigen::VectorXcd d(2 * n);
    d.head(n) = s.tail(n);
    d.tail(n) = -(m(t).cast<cd>() * s.head(n));
    return d;
  };
  y = integrate_ode(rhs, state0.t, y, t1, options);
  return {y.head(n), y.tail(n), t1};
}

HillState integrate_hill(const HillCoefficient& coeff, const HillState& state0, double t1,
                         double tol) {
  OdeOptions opt;
  opt.tol = tol;
  return integrate_hill([&coeff](double t) { return coeff(t); }, state0, t1, opt);
}

Monodromy monodromy(const MatrixFunction& m, std::size_t n, double period,
                    const OdeOptions& options, double det_tolerance) {
  if (!(period > 0.0) || !std::isfinite(period)) throw InputError("period must be positive");
  const auto dim = static_cast<Eigen::Index>(2 * n);
  Eigen::MatrixXd fundamental(dim, dim);
  const auto half = static_cast<Eigen::Index>(n);
  parallel_for(static_cast<std::size_t>(dim), [&](std::size_t col) {
    Eigen::VectorXd y = Eigen::VectorXd::Unit(dim, static_cast<Eigen::Index>(col));
    auto rhs = [&](double t, const Eigen::VectorXd& s) {
      Eigen::VectorXd d(dim);
      d.head(half) = s.tail(half);
      d.tail(half) = -(m(t) * s.head(half));
      return d;
    };
    fundamental.col(static_cast<Eigen::Index>(col)) = integrate_ode(rhs, 0.0, y, period, options);
  });
  Monodromy out;
  out.matrix = fundamental.cast<cd>();
  out.period = period;
  out.determinant_error = std::abs(fundamental.determinant() - 1.0);
  if (out.determinant_error > det_tolerance) {
    std::ostringstream msg;
    msg << "monodromy determinant deviates from 1 by " << out.determinant_error;
    throw NumericalError(msg.str());
  }
  return out;
}

Monodromy monodromy(const HillCoefficient& coeff, double tol, double det_tolerance) {
  OdeOptions opt;
  opt.tol = tol;
  return monodromy([&coeff](double t) { return coeff(t); }, coeff.size(), coeff.period(), opt,
                   det_tolerance);
}

double fold(double value, double omega) {
  double r = std::fmod(value, omega);
  if (r < 0.0) r += omega;
  if (r >= omega) r -= omega;
  return r;
}

double circular_distance(double a, double b, double omega) {
  const double d = fold(a - b, omega);
  return std::min(d, omega - d);
}

Quasifrequencies quasifrequencies(const Monodromy& mono, double omega) {
  if (!(omega > 0.0)) throw InputError("Omega must be positive");
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(mono.matrix, true);
  if (es.info() != Eigen::Success) throw NumericalError("monodromy eigensolve failed");
  const auto dim = mono.matrix.rows();

  Eigen::VectorXcd w(dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    const cd v = cd(0.0, -1.0) * std::log(es.eigenvalues()[j]) / mono.period;
    w[j] = cd(fold(v.real(), omega), v.imag());
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(dim));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
    if (w[a].real() != w[b].real()) return w[a].real() < w[b].real();
    return w[a].imag() < w[b].imag();
  });

  Quasifrequencies q;
  q.omega = omega;
  q.values.resize(dim);
  q.multipliers.resize(dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    q.values[j] = w[order[static_cast<std::size_t>(j)]];
    q.multipliers[j] = es.eigenvalues()[order[static_cast<std::size_t>(j)]];
  }
  Eigen::MatrixXcd v = es.eigenvectors();
  for (Eigen::Index j = 0; j < dim; ++j) v.col(j).normalize();
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(v);
  const auto& s = svd.singularValues();
  q.eigenvector_condition = s[dim - 1] > 0.0 ? s[0] / s[dim - 1] : INFINITY;
  q.defective = !(q.eigenvector_condition <= 1e10);
  return q;
}

Eigen::VectorXd static_spectrum(const Eigen::MatrixXd& m0) {
  if (m0.rows() != m0.cols() || m0.rows() == 0) throw InputError("M0 must be square");
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m0 + m0.transpose()));
  const auto n = m0.rows();
  Eigen::VectorXd out(2 * n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double lambda = es.eigenvalues()[k];
    if (!(lambda > 0.0)) {
      std::ostringstream msg;
      msg << "M0 is not positive definite: eigenvalue " << lambda;
      throw InputError(msg.str());
    }
    out[k] = -std::sqrt(lambda);
    out[n + k] = std::sqrt(lambda);
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

std::vector<Eigen::VectorXcd> scale_by_material(const ModulationProfile& profile,
                                                const std::vector<double>& times,
                                                const std::vector<Eigen::VectorXcd>& in,
                                                bool to_c) {
  if (times.size() != in.size()) throw InputError("time and sample counts differ");
  std::vector<Eigen::VectorXcd> out(in.size());
  for (std::size_t k = 0; k < in.size(); ++k) {
    if (static_cast<std::size_t>(in[k].size()) != profile.size())
      throw InputError("sample dimension does not match the profile");
    out[k].resize(in[k].size());
    for (Eigen::Index i = 0; i < in[k].size(); ++i) {
      const MaterialState s = eval_material(profile, static_cast<std::size_t>(i), times[k]);
      const double factor = std::sqrt(s.kappa) / s.rho;
      out[k][i] = to_c ? in[k][i] * factor : in[k][i] / factor;
    }
  }
  return out;
}

}  // namespace

std::vector<Eigen::VectorXcd> c_from_psi(const ModulationProfile& profile,
                                         const std::vector<double>& times,
                                         const std::vector<Eigen::VectorXcd>& psi) {
  return scale_by_material(profile, times, psi, true);
}

std::vector<Eigen::VectorXcd> psi_from_c(const ModulationProfile& profile,
                                         const std::vector<double>& times,
                                         const std::vector<Eigen::VectorXcd>& c) {
  return scale_by_material(profile, times, c, false);
}

}  // namespace reslab
