#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "reslab/errors.hpp"

namespace reslab {

struct OdeOptions {
  double tol = 1e-9;           // local error tolerance, mixed absolute/relative
  double initial_step = 0.0;   // 0: automatic
  double min_step = 1e-13;     // relative to max(1, |t|)
  long max_steps = 50'000'000;
  bool fixed_step = false;     // take equal steps of size `step`, no error control
  double step = 0.0;
};

struct OdeStats {
  long accepted = 0;
  long rejected = 0;
  double last_step = 0.0;  // suggested size for a continuation call
};

namespace detail {

template <class State>
double scaled_max(const State& v, const State& y0, const State& y1, double tol) {
  const auto scale = (tol * (1.0 + y0.cwiseAbs().cwiseMax(y1.cwiseAbs()).array())).eval();
  return (v.cwiseAbs().array() / scale).maxCoeff();
}

}  // namespace detail

// Dormand-Prince 5(4) with local extrapolation. `State` is any Eigen
// vector/matrix type; rhs(t, y) returns dy/dt with the same shape.
template <class State, class Rhs>
State integrate_ode(const Rhs& rhs, double t0, State y, double t1, const OdeOptions& opt = {},
                    OdeStats* stats = nullptr) {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  // b - b_hat (fourth-order embedded weights).
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  if (t1 < t0) throw InputError("integration interval must satisfy t1 >= t0");
  OdeStats local;
  OdeStats& st = stats ? *stats : local;
  if (t1 == t0) return y;

  State k1 = rhs(t0, y);
  auto step_once = [&](double t, const State& yn, const State& f1, double h, State& y_new,
                       State& f_new, State& err) {
    const State k2 = rhs(t + c2 * h, (yn + h * a21 * f1).eval());
    const State k3 = rhs(t + c3 * h, (yn + h * (a31 * f1 + a32 * k2)).eval());
    const State k4 = rhs(t + c4 * h, (yn + h * (a41 * f1 + a42 * k2 + a43 * k3)).eval());
    const State k5 = rhs(t + c5 * h, (yn + h * (a51 * f1 + a52 * k2 + a53 * k3 + a54 * k4)).eval());
    const State k6 =
        rhs(t + h, (yn + h * (a61 * f1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)).eval());
    y_new = yn + h * (b1 * f1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    f_new = rhs(t + h, y_new);
    err = h * (e1 * f1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * f_new);
  };

  State y_new, f_new, err;
  double t = t0;

  if (opt.fixed_step) {
    if (!(opt.step > 0.0)) throw InputError("fixed-step mode needs a positive step");
    const long n = std::max(1L, static_cast<long>(std::ceil((t1 - t0) / opt.step - 1e-9)));
    const double h = (t1 - t0) / static_cast<double>(n);
    for (long i = 0; i < n; ++i) {
      step_once(t, y, k1, h, y_new, f_new, err);
      y = y_new;
      k1 = f_new;
      t = (i + 1 == n) ? t1 : t0 + static_cast<double>(i + 1) * h;
      ++st.accepted;
    }
    st.last_step = h;
    return y;
  }

  const double tol = opt.tol;
  if (!(tol > 0.0)) throw InputError("tolerance must be positive");
  double h = opt.initial_step;
  if (!(h > 0.0)) {
    // Hairer-Norsett-Wanner starting step.
    const double d0 = detail::scaled_max(y, y, y, tol);
    const double d1 = detail::scaled_max(k1, y, y, tol);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, t1 - t0);
    const State y1 = y + h0 * k1;
    const double d2 = detail::scaled_max((rhs(t0 + h0, y1) - k1).eval(), y, y, tol) / h0;
    const double dm = std::max(d1, d2);
    const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
    h = std::min(100.0 * h0, h1);
  }

  long steps = 0;
  while (t < t1) {
    if (++steps > opt.max_steps) throw NumericalError("ODE integration exceeded the step limit");
    bool last = false;
    if (t + h >= t1) {
      h = t1 - t;
      last = true;
    }
    if (h < opt.min_step * std::max(1.0, std::abs(t))) {
      std::ostringstream msg;
      msg << "stiff or degenerate: step size underflow at t = " << t;
      throw NumericalError(msg.str());
    }
    step_once(t, y, k1, h, y_new, f_new, err);
    const double e = detail::scaled_max(err, y, y_new, tol);
    if (!std::isfinite(e)) throw NumericalError("stiff or degenerate: non-finite ODE state");
    if (e <= 1.0) {
      t = last ? t1 : t + h;
      y = y_new;
      k1 = f_new;
      ++st.accepted;
      const double grow = e == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(e, -0.2), 0.2, 5.0);
      if (!last) st.last_step = h * grow;
      else if (st.last_step == 0.0) st.last_step = h;
      h *= grow;
    } else {
      ++st.rejected;
      h *= std::clamp(0.9 * std::pow(e, -0.2), 0.1, 1.0);
    }
  }
  return y;
}

}  // namespace reslab
