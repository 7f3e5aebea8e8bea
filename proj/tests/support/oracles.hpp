#pragma once

#include <cmath>
#include <functional>

namespace spinsurf::testing {

/// Adaptive Simpson quadrature, used as an independent 1-D oracle.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                               int depth = 50) {
  struct Rec {
    const std::function<double(double)>& f;
    double run(double a, double b, double fa, double fm, double fb, double whole, double tol, int depth) const {
      const double m = 0.5 * (a + b), lm = 0.5 * (a + m), rm = 0.5 * (m + b);
      const double flm = f(lm), frm = f(rm);
      const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
      const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
      const double delta = left + right - whole;
      if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
      return run(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + run(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
    }
  };
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return Rec{f}.run(a, b, fa, fm, fb, whole, tol, depth);
}

}  // namespace spinsurf::testing
