#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library routine it is used to check.

#include <cmath>
#include <functional>

namespace oracle {

/// Adaptive Simpson on [a, b] to absolute tolerance tol.
inline double simpson(const std::function<double(double)>& f, double a, double b, double tol, int depth = 50) {
  struct Rec {
    const std::function<double(double)>& f;
    double go(double a, double b, double fa, double fm, double fb, double whole, double tol, int depth) const {
      const double m = 0.5 * (a + b), lm = 0.5 * (a + m), rm = 0.5 * (m + b);
      const double flm = f(lm), frm = f(rm);
      const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
      const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
      const double delta = left + right - whole;
      if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
      return go(a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + go(m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
    }
  };
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return Rec{f}.go(a, b, fa, fm, fb, whole, tol, depth);
}

/// Damped iteration u <- (1 - w) u + w (l1 f(u) + h) from u = h until the step is below tol.
inline double damped_fixed_point(const std::function<double(double)>& f, double l1, double h, double w = 0.5,
                                 double tol = 1e-15, int max_iter = 1000000) {
  double u = h;
  for (int i = 0; i < max_iter; ++i) {
    const double next = (1.0 - w) * u + w * (l1 * f(u) + h);
    if (std::abs(next - u) <= tol * (1.0 + std::abs(u))) return next;
    u = next;
  }
  return u;
}

/// Central difference of f at x.
inline double central_difference(const std::function<double(double)>& f, double x, double step) {
  return (f(x + step) - f(x - step)) / (2.0 * step);
}

/// Observed convergence order from errors at step sizes h and h/2.
inline double observed_order(double err_coarse, double err_fine) { return std::log2(err_coarse / err_fine); }

}  // namespace oracle
