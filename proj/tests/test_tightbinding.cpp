#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "reslab/capacitance.hpp"
#include "reslab/errors.hpp"
#include "reslab/tightbinding.hpp"

using namespace reslab;

namespace {

constexpr double kPi = std::numbers::pi;

TightBindingParams unit_params(double capB = 4.0 * kPi) {
  return {Materials{}, 4.0 * kPi / 3.0, capB};
}

std::vector<Vec3> chain(int n) {
  std::vector<Vec3> z;
  for (int k = 0; k < n; ++k) z.emplace_back(k, 0.0, 0.0);
  return z;
}

std::vector<Vec3> square() { return {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(1, 1, 0), Vec3(0, 1, 0)}; }

Eigen::VectorXd sorted_eigs(const Eigen::MatrixXd& m) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m).eigenvalues();
}

}  // namespace

TEST_CASE("interaction matrix") {
  CHECK(interaction_matrix(chain(1), 4.0 * kPi).a.size() == 1);
  CHECK(interaction_matrix(chain(1), 4.0 * kPi).a(0, 0) == 0.0);
  CHECK(interaction_matrix(chain(2), 4.0 * kPi).a(0, 1) == doctest::Approx(1.0));
  Eigen::Matrix3d expected;
  expected << 0, 1, 0.5, 1, 0, 1, 0.5, 1, 0;
  const Eigen::MatrixXd a = interaction_matrix(chain(3), 4.0 * kPi).a;
  CHECK((a - expected).norm() < 1e-15);
  CHECK(a == a.transpose());
  const std::vector<Vec3> same{Vec3::Zero(), Vec3::Zero()};
  CHECK_THROWS_AS(interaction_matrix(same, 1.0), InputError);
}

TEST_CASE("model structure and spectrum identity") {
  const TightBindingModel m = build_model(unit_params(), chain(3), 0.1);
  CHECK(m.lambda0 == doctest::Approx(std::sqrt(1e-3 * 3.0)));
  const Eigen::MatrixXd h = m.approximant();
  CHECK(h.topRightCorner(3, 3).cwiseAbs().maxCoeff() == 0.0);
  CHECK(h.bottomLeftCorner(3, 3).cwiseAbs().maxCoeff() == 0.0);
  CHECK((m.htilde.head(3).array() == m.lambda0).all());
  CHECK((m.htilde.tail(3).array() == -m.lambda0).all());

  const Eigen::VectorXd s = tb_spectrum(m);
  const Eigen::VectorXd a = sorted_eigs(m.interaction.a);
  std::vector<double> expected;
  for (Eigen::Index j = 0; j < 3; ++j) {
    expected.push_back(m.lambda0 * (1.0 - 0.1 * a[j] / 2.0));
    expected.push_back(-m.lambda0 * (1.0 - 0.1 * a[j] / 2.0));
  }
  std::sort(expected.begin(), expected.end());
  for (Eigen::Index k = 0; k < 6; ++k) CHECK(s[k] == doctest::Approx(expected[k]).epsilon(1e-12));
  for (Eigen::Index k = 0; k < 6; ++k) CHECK(s[k] == doctest::Approx(-s[5 - k]).epsilon(1e-12));
  CHECK_THROWS_AS(build_model(unit_params(), chain(3), 1.5), InputError);
}

TEST_CASE("two resonators reproduce lambda0 (+-1 +- a)") {
  const double eta = 0.1;
  const TightBindingModel m = build_model(unit_params(), chain(2), eta);
  const double a = eta * m.lambda0 * 4.0 * kPi / (8.0 * kPi);
  const Eigen::Vector4d expected(-m.lambda0 - a, -m.lambda0 + a, m.lambda0 - a, m.lambda0 + a);
  CHECK((tb_spectrum(m) - expected).cwiseAbs().maxCoeff() < 1e-15);
  const Eigen::VectorXd decoupled = tb_spectrum(build_model(unit_params(), chain(2), 1e-12));
  CHECK((decoupled - Eigen::Vector4d(-1, -1, 1, 1) * m.lambda0).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("spectrum is invariant under relabelling") {
  std::vector<Vec3> z = square();
  const Eigen::VectorXd s1 = tb_spectrum(build_model(unit_params(), z, 0.1));
  std::swap(z[0], z[2]);
  std::swap(z[1], z[3]);
  const Eigen::VectorXd s2 = tb_spectrum(build_model(unit_params(), z, 0.1));
  CHECK((s1 - s2).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("dilute capacitance spectrum agrees to second order in eta") {
  for (int n : {2, 3}) {
    CAPTURE(n);
    std::vector<double> etas{0.2, 0.1, 0.05}, mismatch;
    const TightBindingParams p = unit_params();
    for (double eta : etas) {
      const TightBindingModel m = build_model(p, chain(n), eta);
      const Eigen::MatrixXd m0 = p.materials.delta / p.volume * dilute_capacitance(chain(n), eta, p.capB).entries;
      mismatch.push_back(compare_spectrum(m, m0).mismatch);
    }
    CHECK(loglog_slope(etas, mismatch) == doctest::Approx(2.0).epsilon(0.1));
  }
}

TEST_CASE("log-log slope fit") {
  CHECK(loglog_slope({1.0, 2.0, 4.0}, {3.0, 12.0, 48.0}) == doctest::Approx(2.0));
  CHECK_THROWS_AS(loglog_slope({1.0}, {1.0}), InputError);
}

TEST_CASE("nearest neighbour graph") {
  CHECK(nearest_neighbours(chain(2)) == Adjacency{{0, 1}});
  CHECK(nearest_neighbours(chain(3)) == Adjacency{{0, 1}, {1, 2}});
  CHECK(nearest_neighbours(square()) == Adjacency{{0, 1}, {0, 3}, {1, 2}, {2, 3}});
}

TEST_CASE("nearest neighbour truncation") {
  SUBCASE("two resonators: no-op") {
    const TightBindingModel m = build_model(unit_params(), chain(2), 0.1);
    const TruncationReport r = nearest_neighbour_truncation(m, nearest_neighbours(chain(2)));
    CHECK(r.spectral_error == 0.0);
    CHECK(r.ratio == 0.0);
  }
  SUBCASE("3-chain against the closed-form 3x3 spectra") {
    // eig([[0,1,1/2],[1,0,1],[1/2,1,0]]) = {-1/2, (1 - sqrt 33)/4, (1 + sqrt 33)/4}
    // eig([[0,1,0],[1,0,1],[0,1,0]]) = {-sqrt 2, 0, sqrt 2}
    const double s33 = std::sqrt(33.0);
    std::vector<double> full{(1.0 - s33) / 4.0, -0.5, (1.0 + s33) / 4.0};
    std::vector<double> nn{-std::sqrt(2.0), 0.0, std::sqrt(2.0)};
    double expected = 0.0;
    for (int k = 0; k < 3; ++k) expected = std::max(expected, 0.5 * std::abs(full[k] - nn[k]));
    for (double eta : {0.2, 0.1, 0.05}) {
      const TightBindingModel m = build_model(unit_params(), chain(3), eta);
      const TruncationReport r = nearest_neighbour_truncation(m, nearest_neighbours(chain(3)));
      CHECK(r.ratio == doctest::Approx(expected).epsilon(1e-12));
      CHECK(r.truncated.delta_plus(0, 2) == 0.0);
      CHECK(r.truncated.delta_plus(0, 1) == m.delta_plus(0, 1));
    }
  }
  SUBCASE("4-ring against the closed-form 4x4 spectra") {
    const double s = 1.0 / std::sqrt(2.0);
    std::vector<double> full{-2.0 + s, -s, -s, 2.0 + s};
    std::vector<double> nn{-2.0, 0.0, 0.0, 2.0};
    double expected = 0.0;
    for (int k = 0; k < 4; ++k) expected = std::max(expected, 0.5 * std::abs(full[k] - nn[k]));
    const TightBindingModel m = build_model(unit_params(), square(), 0.1);
    const TruncationReport r = nearest_neighbour_truncation(m, nearest_neighbours(square()));
    CHECK(r.ratio == doctest::Approx(expected).epsilon(1e-12));
    CHECK(r.ratio > 0.05);
  }
  SUBCASE("invalid adjacency") {
    const TightBindingModel m = build_model(unit_params(), chain(3), 0.1);
    CHECK_THROWS_AS(nearest_neighbour_truncation(m, {{0, 5}}), InputError);
  }
}
