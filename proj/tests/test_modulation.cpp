#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "reslab/errors.hpp"
#include "reslab/modulation.hpp"

using namespace reslab;
using cd = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;

FourierSeries cosine(double omega) { return FourierSeries({0.5, 1.0, 0.5}, omega); }
FourierSeries sine(double omega) { return FourierSeries({cd(0, 0.5), 1.0, cd(0, -0.5)}, omega); }

ModulationProfile profile_with(FourierSeries rho, FourierSeries kappa, double eps, double omega) {
  ModulationProfile p;
  p.omega = omega;
  p.epsilon = eps;
  p.rho_inv = {std::move(rho)};
  p.kappa_inv = {std::move(kappa)};
  return p;
}

Eigen::MatrixXd sample_capacitance() {
  Eigen::MatrixXd c(2, 2);
  c << 12.4, -1.1, -1.1, 12.4;
  return c;
}

ModulationProfile two_resonator_profile(double eps, double omega) {
  ModulationProfile p;
  p.omega = omega;
  p.epsilon = eps;
  p.rho_inv = {FourierSeries({cd(0.1, 0.2), 1.0, cd(0.1, -0.2)}, omega),
               FourierSeries({cd(0, 0), cd(0.3, 0), 1.0, cd(0.3, 0), cd(0, 0)}, omega)};
  p.kappa_inv = {FourierSeries({cd(0.25, 0), 1.0, cd(0.25, 0)}, omega),
                 FourierSeries({cd(0.1, 0.1), cd(0, 0.2), 1.0, cd(0, -0.2), cd(0.1, -0.1)}, omega)};
  return p;
}

}  // namespace

TEST_CASE("Fourier series is real and validates Hermitian symmetry") {
  const FourierSeries s({cd(0.2, 0.3), cd(0.1, -0.4), 1.0, cd(0.1, 0.4), cd(0.2, -0.3)}, 0.7);
  for (double t : {0.0, 0.3, 1.7, 9.1}) CHECK(std::abs(s.evaluate_complex(t).imag()) < 1e-12);
  CHECK_THROWS_AS(FourierSeries({cd(0.2, 0.3), 1.0, cd(0.2, 0.3)}, 1.0), InputError);
  CHECK_THROWS_AS(FourierSeries({1.0, 1.0}, 1.0), InputError);
  CHECK(cosine(2.0)(0.0) == doctest::Approx(2.0));
  CHECK(cosine(2.0)(0.0, 2) == doctest::Approx(-4.0));
}

TEST_CASE("material evaluation") {
  const double omega = 0.5;
  SUBCASE("static profile gives unit materials") {
    const ModulationProfile p = ModulationProfile::static_profile(3, omega);
    for (std::size_t i = 0; i < 3; ++i) {
      const MaterialState m = eval_material(p, i, 1.234);
      CHECK(m.rho == 1.0);
      CHECK(m.kappa == 1.0);
      CHECK(m.dkappa == 0.0);
      CHECK(m.d2kappa == 0.0);
    }
  }
  SUBCASE("1/kappa = 1 + eps cos") {
    const double eps = 0.1;
    const ModulationProfile p = profile_with(FourierSeries::constant(1.0, omega), cosine(omega), eps, omega);
    const MaterialState m = eval_material(p, 0, 0.0);
    CHECK(m.kappa == doctest::Approx(1.0 / (1.0 + eps)));
    CHECK(std::abs(m.dkappa) < 1e-15);
    // kappa = 1 / (1 + eps cos) so kappa''(0) = eps omega^2 / (1 + eps)^2
    CHECK(m.d2kappa == doctest::Approx(eps * omega * omega / std::pow(1.0 + eps, 2)));
  }
  SUBCASE("1/rho = 1 + eps sin vanishes at pi / omega") {
    const ModulationProfile p = profile_with(sine(omega), FourierSeries::constant(1.0, omega), 0.3, omega);
    CHECK(eval_material(p, 0, kPi / omega).rho == doctest::Approx(1.0));
  }
  SUBCASE("degenerate modulation") {
    const ModulationProfile p = profile_with(FourierSeries::constant(1.0, omega), cosine(omega), 1.0, omega);
    CHECK_THROWS_AS(eval_material(p, 0, kPi / omega), NumericalError);
  }
}

TEST_CASE("W diagonals") {
  const double omega = 0.4;
  SUBCASE("static unit sphere") {
    const ModulationProfile p = ModulationProfile::static_profile(2, omega);
    const Eigen::VectorXd vol = Eigen::VectorXd::Constant(2, 4.0 * kPi / 3.0);
    const WDiagonals w = assemble_W(p, vol, 0.7);
    CHECK((w.w1.array() - 3.0 / (4.0 * kPi)).abs().maxCoeff() < 1e-15);
    CHECK((w.w2.array() - 1.0).abs().maxCoeff() == 0.0);
    CHECK(w.w3.cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("W3 against finite differences, second order in the step") {
    const double eps = 0.2;
    const ModulationProfile p = profile_with(FourierSeries::constant(1.0, omega), cosine(omega), eps, omega);
    const Eigen::VectorXd vol = Eigen::VectorXd::Constant(1, 1.0);
    auto kappa = [&](double t) { return 1.0 / (1.0 + eps * std::cos(omega * t)); };
    auto g = [&](double t, double h) {  // kappa' / kappa^{3/2} with kappa' by central differences
      const double dk = (kappa(t + h) - kappa(t - h)) / (2.0 * h);
      return dk / std::pow(kappa(t), 1.5);
    };
    const double t = 1.3;
    auto fd = [&](double h) { return 0.5 * std::sqrt(kappa(t)) * (g(t + h, h) - g(t - h, h)) / (2.0 * h); };
    const double exact = assemble_W(p, vol, t).w3[0];
    const double e1 = std::abs(fd(1e-2) - exact), e2 = std::abs(fd(5e-3) - exact);
    CHECK(std::abs(fd(1e-4) - exact) < 1e-6);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.05));
  }
}

TEST_CASE("Hill coefficient") {
  const double omega = 0.3;
  const Eigen::MatrixXd c = sample_capacitance();
  const Eigen::VectorXd vol = Eigen::VectorXd::Constant(2, 4.0 * kPi / 3.0);
  const Materials mat{1e-3, 1.5, 2.0};

  SUBCASE("static matrix formula, symmetric positive definite") {
    const HillCoefficient h(c, ModulationProfile::static_profile(2, omega), mat, vol);
    const Eigen::MatrixXd m0 = h.static_matrix();
    const Eigen::MatrixXd expected = mat.delta * mat.kappa_r / (mat.rho_r * vol[0]) * c;
    CHECK((m0 - expected).cwiseAbs().maxCoeff() < 1e-18);
    CHECK((h(2.2) - m0).cwiseAbs().maxCoeff() < 1e-18);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m0);
    CHECK(es.eigenvalues().minCoeff() > 0.0);
  }
  SUBCASE("periodicity") {
    const HillCoefficient h(c, two_resonator_profile(0.05, omega), mat, vol);
    for (double t : {0.1, 3.7, 11.0})
      CHECK((h(t + h.period()) - h(t)).cwiseAbs().maxCoeff() < 1e-10 * h(t).cwiseAbs().maxCoeff());
  }
  SUBCASE("rho cancels on the diagonal") {
    ModulationProfile a = two_resonator_profile(0.05, omega);
    ModulationProfile b = a;
    b.rho_inv = {FourierSeries({cd(-0.4, 0.1), 1.0, cd(-0.4, -0.1)}, omega),
                 FourierSeries({cd(0.0, 0.3), 1.0, cd(0.0, -0.3)}, omega)};
    const HillCoefficient ha(c, a, mat, vol), hb(c, b, mat, vol);
    for (double t : {0.4, 2.5}) {
      const double scale = ha(t).cwiseAbs().maxCoeff();
      CHECK((ha(t).diagonal() - hb(t).diagonal()).cwiseAbs().maxCoeff() < 1e-10 * scale);
      CHECK((ha(t) - hb(t)).cwiseAbs().maxCoeff() > 1e-6 * scale);
    }
  }
  SUBCASE("split into static and first-order parts") {
    const HillCoefficient h(c, two_resonator_profile(0.01, omega), mat, vol);
    const SplitM s = split_M(h);
    for (double t : {0.0, 5.0}) CHECK((h(t) - (s.m0 + 0.01 * s.m1(t))).cwiseAbs().maxCoeff() < 1e-17);
    const FirstOrderCheck fo = first_order_check(h);
    CHECK(fo.ratio == doctest::Approx(1.0).epsilon(0.2));
    const SplitM z = split_M(h.with_epsilon(0.0));
    CHECK(z.m1(1.0).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("profile validation") {
    ModulationProfile p = two_resonator_profile(0.01, omega);
    p.kappa_inv[1] = FourierSeries({0.1, 2.0, 0.1}, omega);
    CHECK_THROWS_AS(HillCoefficient(c, p, mat, vol), InputError);
    ModulationProfile q = two_resonator_profile(0.01, omega);
    q.rho_inv[0] = FourierSeries({0.1, 1.0, 0.1}, 2.0 * omega);
    CHECK_THROWS_AS(HillCoefficient(c, q, mat, vol), InputError);
  }
}
