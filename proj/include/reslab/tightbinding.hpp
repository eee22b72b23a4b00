#pragma once

#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "reslab/geometry.hpp"

namespace reslab {

// A_jj = 0, A_jk = capB / (4 pi |z_j - z_k|).
struct InteractionMatrix {
  Eigen::MatrixXd a;
  double capB = 0.0;
  std::vector<Vec3> centers;
};

InteractionMatrix interaction_matrix(std::span<const Vec3> rescaled_centers, double capB);

// Diagonal part lambda0 diag(+1, ..., -1, ...) plus the hopping blocks.
// The positive-frequency block carries -(eta/2) lambda0 A and the negative
// block +(eta/2) lambda0 A, matching the sign of the dilute off-diagonal
// capacitance, so the spectrum is {+-lambda0 (1 - eta a_j / 2)}.
struct TightBindingModel {
  double lambda0 = 0.0;
  Eigen::VectorXd htilde;  // length 2N
  Eigen::MatrixXd delta_plus;
  Eigen::MatrixXd delta_minus;
  double eta = 0.0;
  InteractionMatrix interaction;

  std::size_t size() const { return static_cast<std::size_t>(delta_plus.rows()); }
  // blockdiag(lambda0 Id + delta_plus, -lambda0 Id + delta_minus), 2N x 2N.
  Eigen::MatrixXd approximant() const;
};

struct TightBindingParams {
  Materials materials;
  double volume = 0.0;  // |B|
  double capB = 0.0;
};

double base_frequency(const TightBindingParams& params);

TightBindingModel build_model(const TightBindingParams& params,
                              std::span<const Vec3> rescaled_centers, double eta);

// Eigenvalues of the approximant, ascending.
Eigen::VectorXd tb_spectrum(const TightBindingModel& model);

struct SpectrumComparison {
  double eta = 0.0;
  Eigen::VectorXd tb;
  Eigen::VectorXd full;
  double mismatch = 0.0;  // max |tb - full| after sorting
};

SpectrumComparison compare_spectrum(const TightBindingModel& model, const Eigen::MatrixXd& m0_full);

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

using Adjacency = std::vector<std::pair<int, int>>;

// Each resonator is joined to every other resonator at its minimal distance.
Adjacency nearest_neighbours(std::span<const Vec3> centers, double rel_tol = 1e-9);

struct TruncationReport {
  TightBindingModel truncated;
  double spectral_error = 0.0;  // || eig_NN - eig_full ||_inf
  double ratio = 0.0;           // spectral_error / (eta lambda0)
};

// Keeps only the hopping entries listed in `adjacency` (either orientation).
TruncationReport nearest_neighbour_truncation(const TightBindingModel& model,
                                              const Adjacency& adjacency);

}  // namespace reslab
