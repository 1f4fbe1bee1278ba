#include "mtc/landau.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "mtc/quadrature.hpp"
#include "mtc/root_find.hpp"
#include "mtc/special_math.hpp"

namespace mtc {

namespace {

constexpr double kHalfPi = 0.5 * kPi;
constexpr double kAsymptoticThreshold = 1e12;

// The standard Landau variable is Y = (pi/2) Z + log(pi/2) with Z the alpha = 1,
// beta = 1 stable law of unit scale (S1 parametrization). For Z,
//   P(Z <= u) = (1/pi) integral_0^pi exp(-exp(g(w))) dw,
//   g(w) = -pi u / 2 + log(2/pi) + log(pi - w) - log(sin w) + (pi - w) cot w,
// where w = pi/2 - theta in Zolotarev's notation. g decreases from +inf at w = 0.
struct ZolotarevExponent {
  double offset;  // -pi u / 2 + log(2/pi)

  double operator()(double w) const {
    const double s = std::sin(w);
    if (s <= 0.0) return w < kHalfPi ? std::numeric_limits<double>::infinity() : offset - 1.0;
    return offset + std::log(kPi - w) - std::log(s) + (kPi - w) * std::cos(w) / s;
  }
};

double integrate_split(const RealFunction& f, const ZolotarevExponent& g, double tolerance) {
  // The integrand switches between ~1 and ~0 where g = 0. For large arguments that
  // point moves towards 0 and the transition sharpens, so the panels are graded
  // geometrically on both sides of it.
  std::vector<double> edges{0.0};
  constexpr double kEdgeGap = 1e-300;
  const double hi = kPi * (1.0 - 1e-12);
  if (g(hi) < 0.0 && g(kEdgeGap) > 0.0) {
    const double split = brent_root(g, kEdgeGap, hi, 1e-15 * kPi, 0.0).root;
    if (split > 0.0 && split < kPi) {
      for (double r : {1.0 / 64.0, 1.0 / 16.0, 0.25, 0.5, 0.75}) edges.push_back(split * r);
      for (double w = split; w < kPi; w *= 1.5) edges.push_back(w);
    }
  }
  edges.push_back(kPi);
  return integrate_adaptive(f, edges, tolerance).value;
}

struct TailPair {
  double lower;  // P(Y <= x)
  double upper;  // P(Y > x)
};

TailPair landau_tails(double x) {
  if (std::isnan(x)) return {x, x};
  if (x > kAsymptoticThreshold) return {1.0 - 1.0 / x, 1.0 / x};
  const double u = (x - std::log(kHalfPi)) / kHalfPi;
  const ZolotarevExponent g{-kHalfPi * u + std::log(2.0 / kPi)};

  const RealFunction upper_integrand = [&g](double w) { return -std::expm1(-std::exp(g(w))); };
  const RealFunction lower_integrand = [&g](double w) { return std::exp(-std::exp(g(w))); };

  // Integrate whichever tail is smaller so it keeps relative accuracy.
  const bool upper_small = x > 0.0;
  const RealFunction& small = upper_small ? upper_integrand : lower_integrand;
  double value = integrate_split(small, g, 1e-13) / kPi;
  if (value > 0.0 && value < 1e-3) {
    value = integrate_split(small, g, std::max(1e-10 * value * kPi, 1e-300)) / kPi;
  }
  value = std::clamp(value, 0.0, 1.0);
  return upper_small ? TailPair{1.0 - value, value} : TailPair{value, 1.0 - value};
}

}  // namespace

double landau_sf(double x) { return landau_tails(x).upper; }

double landau_cdf(double x) { return landau_tails(x).lower; }

}  // namespace mtc
