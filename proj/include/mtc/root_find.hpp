#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "mtc/errors.hpp"

namespace mtc {

struct RootResult {
  double root;
  double value;  // f(root)
  int iterations;
};

/// Brent's bracketing root search on [lo, hi]. f(lo) and f(hi) must have opposite
/// signs (or one of them be zero). Stops when the bracket is narrower than
/// x_tolerance or |f| <= f_tolerance. Throws DomainError on an invalid bracket and
/// ConvergenceError after max_iterations.
template <class F>
RootResult brent_root(F&& f, double lo, double hi, double x_tolerance, double f_tolerance,
                      int max_iterations = 200) {
  double a = lo;
  double b = hi;
  double fa = f(a);
  double fb = f(b);
  if (fa == 0.0) return {a, fa, 0};
  if (fb == 0.0) return {b, fb, 0};
  if ((fa > 0.0) == (fb > 0.0)) {
    throw DomainError("brent_root: root not bracketed on [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "]");
  }

  double c = a;
  double fc = fa;
  double d = b - a;
  double e = d;
  for (int iter = 1; iter <= max_iterations; ++iter) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = b - a;
      e = d;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol = 2.0 * 1e-16 * std::abs(b) + 0.5 * x_tolerance;
    const double half = 0.5 * (c - b);
    if (std::abs(half) <= tol || std::abs(fb) <= f_tolerance) return {b, fb, iter};

    if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
      // Inverse quadratic interpolation, or secant when only two points are distinct.
      double p;
      double q;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * half * s;
        q = 1.0 - s;
      } else {
        const double qa = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * half * qa * (qa - r) - (b - a) * (r - 1.0));
        q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      if (2.0 * p < std::min(3.0 * half * q - std::abs(tol * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = half;
        e = d;
      }
    } else {
      d = half;
      e = d;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > tol ? d : (half > 0.0 ? tol : -tol);
    fb = f(b);
  }
  throw ConvergenceError("brent_root: no convergence after " + std::to_string(max_iterations) +
                         " iterations");
}

}  // namespace mtc
