#ifndef SPECREG_IVP_HPP
#define SPECREG_IVP_HPP

// Adaptive Dormand-Prince 5(4) integrator for small complex systems.  The
// spectral problems here are linear with coefficients up to |lambda|^2, so an
// explicit embedded pair with PI-free step control is adequate; the error
// test is a max norm relative to atol + rtol*|y|.

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace specreg {

struct IvpOptions {
  double rtol = 1e-12;
  double atol = 1e-14;
  long max_steps = 20000000;
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using CState = std::array<std::complex<double>, 2>;

namespace detail {

inline double state_err(const CState& e, const CState& y0, const CState& y1,
                        double atol, double rtol) {
  double m = 0.0;
  for (int i = 0; i < 2; ++i) {
    double sc = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    m = std::max(m, std::abs(e[i]) / sc);
  }
  return m;
}

}  // namespace detail

// Integrates y' = rhs(x, y) from x0 to x1 (either direction); y holds the
// initial state on entry and the final state on exit.  Calls observe(x, y)
// after every accepted step when provided.
template <class F, class Obs>
void dopri5(F&& rhs, double x0, double x1, CState& y, const IvpOptions& opt,
            Obs&& observe) {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                          a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600,
                          e3 = 500.0 / 1113 - 7571.0 / 16695,
                          e4 = 125.0 / 192 - 393.0 / 640,
                          e5 = -2187.0 / 6784 + 92097.0 / 339200,
                          e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

  const double span = x1 - x0;
  if (span == 0.0) return;
  const double dir = span > 0 ? 1.0 : -1.0;
  double x = x0;
  double h = span / 64.0;
  CState k1 = rhs(x, y);
  long steps = 0;

  while (dir * (x1 - x) > 0.0) {
    if (++steps > opt.max_steps) throw SolverError("step budget exhausted");
    if (dir * (x + h) > dir * x1) h = x1 - x;
    if (std::abs(h) < 1e-15 * (std::abs(x) + 1.0))
      throw SolverError("step size underflow");

    CState y2, y3, y4, y5, y6, y7;
    for (int i = 0; i < 2; ++i) y2[i] = y[i] + h * (a21 * k1[i]);
    CState k2 = rhs(x + c2 * h, y2);
    for (int i = 0; i < 2; ++i) y3[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    CState k3 = rhs(x + c3 * h, y3);
    for (int i = 0; i < 2; ++i)
      y4[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    CState k4 = rhs(x + c4 * h, y4);
    for (int i = 0; i < 2; ++i)
      y5[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    CState k5 = rhs(x + c5 * h, y5);
    for (int i = 0; i < 2; ++i)
      y6[i] = y[i] +
              h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    CState k6 = rhs(x + h, y6);
    for (int i = 0; i < 2; ++i)
      y7[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    CState k7 = rhs(x + h, y7);

    CState err;
    for (int i = 0; i < 2; ++i)
      err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                    e7 * k7[i]);
    double en = detail::state_err(err, y, y7, opt.atol, opt.rtol);

    if (en <= 1.0) {
      x += h;
      y = y7;
      k1 = k7;  // first-same-as-last
      observe(x, y);
    }
    double fac = en > 0.0 ? 0.9 * std::pow(en, -0.2) : 5.0;
    fac = std::min(5.0, std::max(0.2, fac));
    h *= fac;
  }
}

template <class F>
void dopri5(F&& rhs, double x0, double x1, CState& y, const IvpOptions& opt) {
  dopri5(rhs, x0, x1, y, opt, [](double, const CState&) {});
}

}  // namespace specreg

#endif  // SPECREG_IVP_HPP
