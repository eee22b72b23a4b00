#include "reslab/modulation.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "reslab/errors.hpp"

namespace reslab {

using cd = std::complex<double>;

FourierSeries::FourierSeries(std::vector<cd> coefficients, double omega)
    : coeffs_(std::move(coefficients)), omega_(omega) {
  if (coeffs_.size() % 2 != 1) throw InputError("Fourier coefficient list must have odd length");
  if (!(omega_ > 0.0) || !std::isfinite(omega_)) throw InputError("Omega must be positive");
  double scale = 0.0;
  for (const auto& c : coeffs_) scale = std::max(scale, std::abs(c));
  const int m = order();
  for (int n = 0; n <= m; ++n) {
    if (std::abs(coefficient(-n) - std::conj(coefficient(n))) > 1e-12 * std::max(scale, 1.0)) {
      std::ostringstream msg;
      msg << "Fourier coefficients violate c_{-n} = conj(c_n) at n = " << n;
      throw InputError(msg.str());
    }
  }
}

FourierSeries FourierSeries::constant(double value, double omega) {
  return FourierSeries({cd(value, 0.0)}, omega);
}

cd FourierSeries::coefficient(int n) const {
  const int m = order();
  if (n < -m || n > m) return 0.0;
  return coeffs_[static_cast<std::size_t>(n + m)];
}

cd FourierSeries::evaluate_complex(double t, int derivative) const {
  const int m = order();
  cd sum = 0.0;
  for (int n = -m; n <= m; ++n) {
    const cd c = coeffs_[static_cast<std::size_t>(n + m)];
    if (c == cd(0.0)) continue;
    cd factor = 1.0;
    for (int k = 0; k < derivative; ++k) factor *= cd(0.0, n * omega_);
    sum += c * factor * std::exp(cd(0.0, n * omega_ * t));
  }
  return sum;
}

double FourierSeries::operator()(double t, int derivative) const {
  return evaluate_complex(t, derivative).real();
}

ModulationProfile ModulationProfile::static_profile(std::size_t n, double omega) {
  ModulationProfile p;
  p.omega = omega;
  p.rho_inv.assign(n, FourierSeries::constant(1.0, omega));
  p.kappa_inv.assign(n, FourierSeries::constant(1.0, omega));
  return p;
}

double ModulationProfile::period() const { return 2.0 * std::numbers::pi / omega; }

ModulationProfile ModulationProfile::with_epsilon(double eps) const {
  ModulationProfile p = *this;
  p.epsilon = eps;
  return p;
}

void ModulationProfile::validate() const {
  if (!(omega > 0.0) || !std::isfinite(omega)) throw InputError("Omega must be positive");
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw InputError("epsilon must be >= 0");
  if (rho_inv.size() != kappa_inv.size() || rho_inv.empty())
    throw InputError("rho_inv and kappa_inv must list one series per resonator");
  auto check = [&](const FourierSeries& s, const char* what, std::size_t i) {
    if (std::abs(s.omega() - omega) > 1e-14 * omega)
      throw InputError(std::string(what) + " series " + std::to_string(i) +
                       " uses a different Omega");
    if (std::abs(s.coefficient(0) - cd(1.0)) > 1e-14)
      throw InputError(std::string(what) + " series " + std::to_string(i) +
                       " must have zero mode 1 (static normalisation)");
  };
  for (std::size_t i = 0; i < rho_inv.size(); ++i) {
    check(rho_inv[i], "rho_inv", i);
    check(kappa_inv[i], "kappa_inv", i);
  }
}

namespace {

double modulated(const FourierSeries& shape, double eps, double t, int derivative) {
  const double varying = shape(t, derivative) - (derivative == 0 ? shape.coefficient(0).real() : 0.0);
  return (derivative == 0 ? 1.0 : 0.0) + eps * varying;
}

}  // namespace

double ModulationProfile::rho_inv_value(std::size_t i, double t, int derivative) const {
  return modulated(rho_inv.at(i), epsilon, t, derivative);
}

double ModulationProfile::kappa_inv_value(std::size_t i, double t, int derivative) const {
  return modulated(kappa_inv.at(i), epsilon, t, derivative);
}

MaterialState eval_material(const ModulationProfile& profile, std::size_t i, double t) {
  const double r = profile.rho_inv_value(i, t);
  const double u = profile.kappa_inv_value(i, t);
  if (std::abs(u) < 1e-8 || std::abs(r) < 1e-8) {
    std::ostringstream msg;
    msg << "modulation degenerate: resonator " << i << " at t = " << t;
    throw NumericalError(msg.str());
  }
  const double du = profile.kappa_inv_value(i, t, 1);
  const double d2u = profile.kappa_inv_value(i, t, 2);
  MaterialState s;
  s.rho = 1.0 / r;
  s.kappa = 1.0 / u;
  s.dkappa = -s.kappa * s.kappa * du;
  s.d2kappa = -d2u / (u * u) + 2.0 * du * du / (u * u * u);
  return s;
}

WDiagonals assemble_W(const ModulationProfile& profile, const Eigen::VectorXd& volumes, double t) {
  const auto n = static_cast<Eigen::Index>(profile.size());
  if (volumes.size() != n) throw InputError("volume count does not match modulation profile");
  WDiagonals w{Eigen::VectorXd(n), Eigen::VectorXd(n), Eigen::VectorXd(n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    const MaterialState s = eval_material(profile, static_cast<std::size_t>(i), t);
    const double sk = std::sqrt(s.kappa);
    w.w1[i] = sk * s.rho / volumes[i];
    w.w2[i] = sk / s.rho;
    w.w3[i] = 0.5 * sk *
              (s.d2kappa / std::pow(s.kappa, 1.5) - 1.5 * s.dkappa * s.dkappa / std::pow(s.kappa, 2.5));
  }
  return w;
}

HillCoefficient::HillCoefficient(Eigen::MatrixXd capacitance, ModulationProfile profile,
                                 Materials materials, Eigen::VectorXd volumes)
    : capacitance_(std::move(capacitance)),
      profile_(std::move(profile)),
      materials_(materials),
      volumes_(std::move(volumes)) {
  profile_.validate();
  const auto n = capacitance_.rows();
  if (capacitance_.cols() != n || volumes_.size() != n ||
      static_cast<Eigen::Index>(profile_.size()) != n)
    throw InputError("capacitance, volumes and modulation profile sizes differ");
  if (!(materials_.delta > 0) || !(materials_.kappa_r > 0) || !(materials_.rho_r > 0))
    throw InputError("material constants must be positive");
  if (!(volumes_.array() > 0.0).all()) throw InputError("volumes must be positive");
}

HillCoefficient::HillCoefficient(const CapacitanceMatrix& capacitance, ModulationProfile profile,
                                 const ResonatorSystem& system)
    : HillCoefficient(capacitance.entries, std::move(profile), system.materials(),
                      system.volumes()) {}

HillCoefficient HillCoefficient::with_epsilon(double eps) const {
  HillCoefficient c = *this;
  c.profile_.epsilon = eps;
  c.profile_.validate();
  return c;
}

Eigen::MatrixXd HillCoefficient::static_matrix() const {
  const double k = materials_.delta * materials_.kappa_r / materials_.rho_r;
  return k * volumes_.cwiseInverse().asDiagonal() * capacitance_;
}

Eigen::MatrixXd HillCoefficient::operator()(double t) const {
  const WDiagonals w = assemble_W(profile_, volumes_, t);
  const double k = materials_.delta * materials_.kappa_r / materials_.rho_r;
  Eigen::MatrixXd m = k * w.w1.asDiagonal() * capacitance_ * w.w2.asDiagonal();
  m.diagonal() += w.w3;
  return m;
}

Eigen::MatrixXd assemble_M(const HillCoefficient& coeff, double t) { return coeff(t); }

SplitM split_M(const HillCoefficient& coeff) {
  SplitM s;
  s.m0 = coeff.static_matrix();
  s.epsilon = coeff.epsilon();
  if (s.epsilon == 0.0) {
    const auto n = static_cast<Eigen::Index>(coeff.size());
    s.m1 = [n](double) { return Eigen::MatrixXd::Zero(n, n).eval(); };
  } else {
    s.m1 = [coeff, m0 = s.m0, eps = s.epsilon](double t) {
      return ((coeff(t) - m0) / eps).eval();
    };
  }
  return s;
}

FirstOrderCheck first_order_check(const HillCoefficient& coeff, int samples) {
  auto sup_norm = [&](const HillCoefficient& c) {
    const SplitM s = split_M(c);
    double sup = 0.0;
    for (int k = 0; k < samples; ++k) sup = std::max(sup, s.m1(c.period() * k / samples).norm());
    return sup;
  };
  FirstOrderCheck out;
  out.sup_m1 = sup_norm(coeff);
  out.sup_m1_half = sup_norm(coeff.with_epsilon(0.5 * coeff.epsilon()));
  out.ratio = out.sup_m1_half > 0.0 ? out.sup_m1 / out.sup_m1_half : 1.0;
  return out;
}

}  // namespace reslab
