#include "reslab/tightbinding.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "reslab/errors.hpp"

namespace reslab {

InteractionMatrix interaction_matrix(std::span<const Vec3> rescaled_centers, double capB) {
  if (rescaled_centers.empty()) throw InputError("interaction matrix needs at least one center");
  if (!(capB > 0.0)) throw InputError("capB must be positive");
  const auto n = static_cast<Eigen::Index>(rescaled_centers.size());
  InteractionMatrix out;
  out.capB = capB;
  out.centers.assign(rescaled_centers.begin(), rescaled_centers.end());
  out.a = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = j + 1; k < n; ++k) {
      const double d = (rescaled_centers[j] - rescaled_centers[k]).norm();
      if (!(d > 0.0)) {
        std::ostringstream msg;
        msg << "centers " << j << " and " << k << " coincide";
        throw InputError(msg.str());
      }
      out.a(j, k) = out.a(k, j) = capB / (4.0 * std::numbers::pi * d);
    }
  }
  return out;
}

Eigen::MatrixXd TightBindingModel::approximant() const {
  const auto n = delta_plus.rows();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  h.topLeftCorner(n, n) = delta_plus;
  h.bottomRightCorner(n, n) = delta_minus;
  h.diagonal() += htilde;
  return h;
}

double base_frequency(const TightBindingParams& params) {
  const Materials& m = params.materials;
  if (!(m.delta > 0.0 && m.kappa_r > 0.0 && m.rho_r > 0.0))
    throw InputError("material constants must be positive");
  if (!(params.volume > 0.0) || !(params.capB > 0.0))
    throw InputError("volume and capB must be positive");
  return std::sqrt(m.delta * m.kappa_r * params.capB / (m.rho_r * params.volume));
}

TightBindingModel build_model(const TightBindingParams& params,
                              std::span<const Vec3> rescaled_centers, double eta) {
  if (!(eta > 0.0 && eta < 1.0)) throw InputError("eta must lie in (0, 1)");
  TightBindingModel model;
  model.eta = eta;
  model.lambda0 = base_frequency(params);
  model.interaction = interaction_matrix(rescaled_centers, params.capB);
  const auto n = model.interaction.a.rows();
  model.htilde.resize(2 * n);
  model.htilde.head(n).setConstant(model.lambda0);
  model.htilde.tail(n).setConstant(-model.lambda0);
  model.delta_minus = 0.5 * eta * model.lambda0 * model.interaction.a;
  model.delta_plus = -model.delta_minus;
  return model;
}

Eigen::VectorXd tb_spectrum(const TightBindingModel& model) {
  const auto n = model.delta_plus.rows();
  Eigen::VectorXd out(2 * n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> plus(
      model.delta_plus + model.lambda0 * Eigen::MatrixXd::Identity(n, n), Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> minus(
      model.delta_minus - model.lambda0 * Eigen::MatrixXd::Identity(n, n), Eigen::EigenvaluesOnly);
  out.head(n) = minus.eigenvalues();
  out.tail(n) = plus.eigenvalues();
  std::sort(out.begin(), out.end());
  return out;
}

SpectrumComparison compare_spectrum(const TightBindingModel& model,
                                    const Eigen::MatrixXd& m0_full) {
  if (static_cast<std::size_t>(m0_full.rows()) != model.size())
    throw InputError("model and M0 dimensions differ");
  SpectrumComparison out;
  out.eta = model.eta;
  out.tb = tb_spectrum(model);
  Eigen::EigenSolver<Eigen::MatrixXd> es(m0_full, false);
  if (es.info() != Eigen::Success) throw NumericalError("eigensolve of M0 failed");
  const auto n = m0_full.rows();
  out.full.resize(2 * n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto lam = es.eigenvalues()[k];
    if (!(lam.real() > 0.0)) throw NumericalError("M0 has a non-positive eigenvalue");
    out.full[k] = std::sqrt(lam.real());
    out.full[n + k] = -out.full[k];
  }
  std::sort(out.full.begin(), out.full.end());
  out.mismatch = (out.tb - out.full).cwiseAbs().maxCoeff();
  return out;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InputError("slope fit needs two or more points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!(x[k] > 0.0) || !(y[k] > 0.0)) throw NumericalError("slope fit needs positive data");
    const double lx = std::log(x[k]), ly = std::log(y[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw InputError("slope fit needs distinct abscissae");
  return (n * sxy - sx * sy) / denom;
}

Adjacency nearest_neighbours(std::span<const Vec3> centers, double rel_tol) {
  const int n = static_cast<int>(centers.size());
  Adjacency out;
  for (int j = 0; j < n; ++j) {
    double best = INFINITY;
    for (int k = 0; k < n; ++k)
      if (k != j) best = std::min(best, (centers[j] - centers[k]).norm());
    for (int k = 0; k < n; ++k) {
      if (k == j) continue;
      const double d = (centers[j] - centers[k]).norm();
      const auto edge = std::minmax(j, k);
      if (d <= best * (1.0 + rel_tol) &&
          std::find(out.begin(), out.end(), std::pair<int, int>(edge)) == out.end())
        out.emplace_back(edge);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

TruncationReport nearest_neighbour_truncation(const TightBindingModel& model,
                                              const Adjacency& adjacency) {
  const auto n = static_cast<int>(model.size());
  Eigen::MatrixXd mask = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [j, k] : adjacency) {
    if (j < 0 || k < 0 || j >= n || k >= n || j == k) {
      std::ostringstream msg;
      msg << "adjacency pair (" << j << ", " << k << ") is out of range";
      throw InputError(msg.str());
    }
    mask(j, k) = mask(k, j) = 1.0;
  }
  TruncationReport out;
  out.truncated = model;
  out.truncated.delta_plus = model.delta_plus.cwiseProduct(mask);
  out.truncated.delta_minus = model.delta_minus.cwiseProduct(mask);
  out.truncated.interaction.a = model.interaction.a.cwiseProduct(mask);
  out.spectral_error = (tb_spectrum(out.truncated) - tb_spectrum(model)).cwiseAbs().maxCoeff();
  out.ratio = out.spectral_error / (model.eta * model.lambda0);
  return out;
}

}  // namespace reslab
