#pragma once

// Adaptive Dormand-Prince 5(4) for small autonomous systems.
//
// Embedded error estimate with the standard step controller
// h <- h * clamp(0.9 err^(-1/5), 0.2, 5). Accepted steps keep the
// derivative at both ends, so cubic Hermite interpolation serves as
// dense output for resampling and event location.

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>

#include "solact/errors.hpp"

namespace solact {

using State2 = std::array<double, 2>;

struct OdeOptions {
  double rtol = 1e-11;
  double atol = 1e-13;
  double max_step = std::numeric_limits<double>::infinity();
  std::size_t max_steps = 50'000'000;
};

namespace detail {

struct Dopri5Step {
  double z0 = 0.0, z1 = 0.0;
  State2 y0{}, y1{};
  State2 f0{}, f1{};

  // Cubic Hermite interpolation on the accepted step.
  State2 eval(double z) const {
    const double h = z1 - z0;
    const double s = (z - z0) / h;
    const double s2 = s * s;
    const double h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
    const double h10 = s * (1.0 - s) * (1.0 - s);
    const double h01 = s2 * (3.0 - 2.0 * s);
    const double h11 = s2 * (s - 1.0);
    State2 y;
    for (int i = 0; i < 2; ++i)
      y[i] = h00 * y0[i] + h10 * h * f0[i] + h01 * y1[i] + h11 * h * f1[i];
    return y;
  }
};

template <class Rhs>
class Dopri5 {
 public:
  Dopri5(Rhs rhs, double z0, const State2& y0, double direction,
         const OdeOptions& opts)
      : rhs_(std::move(rhs)), opts_(opts), dir_(direction >= 0.0 ? 1.0 : -1.0) {
    step_.z1 = z0;
    step_.y1 = y0;
    step_.f1 = rhs_(y0);
    h_ = initial_step(y0, step_.f1);
  }

  // Advances by one accepted step; afterwards current() describes it.
  void step() {
    if (++count_ > opts_.max_steps)
      throw numeric_error("ODE step budget exhausted");
    const double z = step_.z1;
    const State2 y = step_.y1;
    const State2 f = step_.f1;
    for (;;) {
      const double h = dir_ * h_;
      State2 k2, k3, k4, k5, k6, ynew, fnew, yerr;
      State2 t;

      for (int i = 0; i < 2; ++i) t[i] = y[i] + h * (a21 * f[i]);
      k2 = rhs_(t);
      for (int i = 0; i < 2; ++i) t[i] = y[i] + h * (a31 * f[i] + a32 * k2[i]);
      k3 = rhs_(t);
      for (int i = 0; i < 2; ++i)
        t[i] = y[i] + h * (a41 * f[i] + a42 * k2[i] + a43 * k3[i]);
      k4 = rhs_(t);
      for (int i = 0; i < 2; ++i)
        t[i] = y[i] + h * (a51 * f[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
      k5 = rhs_(t);
      for (int i = 0; i < 2; ++i)
        t[i] = y[i] + h * (a61 * f[i] + a62 * k2[i] + a63 * k3[i] +
                           a64 * k4[i] + a65 * k5[i]);
      k6 = rhs_(t);
      for (int i = 0; i < 2; ++i)
        ynew[i] = y[i] + h * (b1 * f[i] + b3 * k3[i] + b4 * k4[i] +
                              b5 * k5[i] + b6 * k6[i]);
      fnew = rhs_(ynew);
      for (int i = 0; i < 2; ++i)
        yerr[i] = h * (e1 * f[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                       e6 * k6[i] + e7 * fnew[i]);

      double err = 0.0;
      for (int i = 0; i < 2; ++i) {
        const double sc =
            opts_.atol +
            opts_.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
        const double r = yerr[i] / sc;
        err += r * r;
      }
      err = std::sqrt(0.5 * err);

      if (err <= 1.0 || h_ <= min_step(z)) {
        step_.z0 = z;
        step_.y0 = y;
        step_.f0 = f;
        step_.z1 = z + h;
        step_.y1 = ynew;
        step_.f1 = fnew;
        const double grow =
            err == 0.0 ? 5.0
                       : std::min(5.0, std::max(0.2, 0.9 * std::pow(err, -0.2)));
        h_ = std::min(h_ * grow, opts_.max_step);
        return;
      }
      h_ = std::max(h_ * std::max(0.2, 0.9 * std::pow(err, -0.2)),
                    min_step(z));
    }
  }

  const Dopri5Step& current() const { return step_; }
  double z() const { return step_.z1; }
  const State2& y() const { return step_.y1; }
  const State2& f() const { return step_.f1; }

  // Replaces the current state (e.g. after an invariant projection); the
  // step size estimate is kept.
  void reset(double z, const State2& y) {
    step_.z1 = z;
    step_.y1 = y;
    step_.f1 = rhs_(y);
  }

  // Caps the size of the next attempted step so integration can land
  // exactly on a requested endpoint (full integrator accuracy, no
  // interpolation).
  void clamp_next(double h_abs) {
    h_abs = std::abs(h_abs);
    if (h_abs > 0.0 && h_abs < h_) h_ = h_abs;
  }

 private:
  double min_step(double z) const {
    return 16.0 * std::numeric_limits<double>::epsilon() *
           std::max(1.0, std::abs(z));
  }

  double initial_step(const State2& y, const State2& f) const {
    double ynorm = std::max(std::abs(y[0]), std::abs(y[1]));
    double fnorm = std::max(std::abs(f[0]), std::abs(f[1]));
    double h = (fnorm > 0.0) ? 0.01 * std::max(ynorm, opts_.atol) / fnorm : 1e-6;
    if (!(h > 0.0) || !std::isfinite(h)) h = 1e-6;
    return std::min(h, opts_.max_step);
  }

  // Dormand-Prince coefficients.
  static constexpr double a21 = 1.0 / 5.0;
  static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
  static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0,
                          a43 = 32.0 / 9.0;
  static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                          a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
  static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                          a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                          a65 = -5103.0 / 18656.0;
  static constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0,
                          b4 = 125.0 / 192.0, b5 = -2187.0 / 6784.0,
                          b6 = 11.0 / 84.0;
  // b - bhat (5th-order weights minus the embedded 4th-order ones).
  static constexpr double e1 = 35.0 / 384.0 - 5179.0 / 57600.0;
  static constexpr double e3 = 500.0 / 1113.0 - 7571.0 / 16695.0;
  static constexpr double e4 = 125.0 / 192.0 - 393.0 / 640.0;
  static constexpr double e5 = -2187.0 / 6784.0 + 92097.0 / 339200.0;
  static constexpr double e6 = 11.0 / 84.0 - 187.0 / 2100.0;
  static constexpr double e7 = -1.0 / 40.0;

  Rhs rhs_;
  OdeOptions opts_;
  double dir_;
  double h_ = 1e-6;
  Dopri5Step step_{};
  std::size_t count_ = 0;
};

// Locates a sign change of g(y) inside an accepted step by bisection on
// the Hermite interpolant. Returns the crossing coordinate.
template <class G>
inline double locate_event(const Dopri5Step& st, G g, double z_lo,
                           double z_hi) {
  double glo = g(st.eval(z_lo));
  for (int i = 0; i < 200; ++i) {
    const double zm = 0.5 * (z_lo + z_hi);
    if (zm == z_lo || zm == z_hi) break;
    const double gm = g(st.eval(zm));
    if ((glo <= 0.0) == (gm <= 0.0)) {
      z_lo = zm;
      glo = gm;
    } else {
      z_hi = zm;
    }
  }
  return 0.5 * (z_lo + z_hi);
}

}  // namespace detail
}  // namespace solact
