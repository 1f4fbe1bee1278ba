#include "mtc/special_math.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "mtc/errors.hpp"

namespace mtc {

namespace {

constexpr double kInvSqrt2 = 0.707106781186547524400844362104849039;

// Wichura, Algorithm AS241 (PPND16). Accurate to about 1e-16 before refinement.
double quantile_as241(double p) {
  constexpr double split1 = 0.425;
  constexpr double split2 = 5.0;
  constexpr double const1 = 0.180625;
  constexpr double const2 = 1.6;

  constexpr double a0 = 3.3871328727963666080;
  constexpr double a1 = 1.3314166789178437745e2;
  constexpr double a2 = 1.9715909503065514427e3;
  constexpr double a3 = 1.3731693765509461125e4;
  constexpr double a4 = 4.5921953931549871457e4;
  constexpr double a5 = 6.7265770927008700853e4;
  constexpr double a6 = 3.3430575583588128105e4;
  constexpr double a7 = 2.5090809287301226727e3;
  constexpr double b1 = 4.2313330701600911252e1;
  constexpr double b2 = 6.8718700749205790830e2;
  constexpr double b3 = 5.3941960214247511077e3;
  constexpr double b4 = 2.1213794301586595867e4;
  constexpr double b5 = 3.9307895800092710610e4;
  constexpr double b6 = 2.8729085735721942674e4;
  constexpr double b7 = 5.2264952788528545610e3;

  constexpr double c0 = 1.42343711074968357734;
  constexpr double c1 = 4.63033784615654529590;
  constexpr double c2 = 5.76949722146069140550;
  constexpr double c3 = 3.64784832476320460504;
  constexpr double c4 = 1.27045825245236838258;
  constexpr double c5 = 2.41780725177450611770e-1;
  constexpr double c6 = 2.27238449892691845833e-2;
  constexpr double c7 = 7.74545014278341407640e-4;
  constexpr double d1 = 2.05319162663775882187;
  constexpr double d2 = 1.67638483018380384940;
  constexpr double d3 = 6.89767334985100004550e-1;
  constexpr double d4 = 1.48103976427480074590e-1;
  constexpr double d5 = 1.51986665636164571966e-2;
  constexpr double d6 = 5.47593808499534494600e-4;
  constexpr double d7 = 1.05075007164441684324e-9;

  constexpr double e0 = 6.65790464350110377720;
  constexpr double e1 = 5.46378491116411436990;
  constexpr double e2 = 1.78482653991729133580;
  constexpr double e3 = 2.96560571828504891230e-1;
  constexpr double e4 = 2.65321895265761230930e-2;
  constexpr double e5 = 1.24266094738807843860e-3;
  constexpr double e6 = 2.71155556874348757815e-5;
  constexpr double e7 = 2.01033439929228813265e-7;
  constexpr double f1 = 5.99832206555887937690e-1;
  constexpr double f2 = 1.36929880922735805310e-1;
  constexpr double f3 = 1.48753612908506148525e-2;
  constexpr double f4 = 7.86869131145613259100e-4;
  constexpr double f5 = 1.84631831751005468180e-5;
  constexpr double f6 = 1.42151175831644588870e-7;
  constexpr double f7 = 2.04426310338993978564e-15;

  const double q = p - 0.5;
  if (std::abs(q) <= split1) {
    const double r = const1 - q * q;
    return q * (((((((a7 * r + a6) * r + a5) * r + a4) * r + a3) * r + a2) * r + a1) * r + a0) /
           (((((((b7 * r + b6) * r + b5) * r + b4) * r + b3) * r + b2) * r + b1) * r + 1.0);
  }
  double r = std::sqrt(-std::log(q < 0.0 ? p : 1.0 - p));
  double z;
  if (r <= split2) {
    r -= const2;
    z = (((((((c7 * r + c6) * r + c5) * r + c4) * r + c3) * r + c2) * r + c1) * r + c0) /
        (((((((d7 * r + d6) * r + d5) * r + d4) * r + d3) * r + d2) * r + d1) * r + 1.0);
  } else {
    r -= split2;
    z = (((((((e7 * r + e6) * r + e5) * r + e4) * r + e3) * r + e2) * r + e1) * r + e0) /
        (((((((f7 * r + f6) * r + f5) * r + f4) * r + f3) * r + f2) * r + f1) * r + 1.0);
  }
  return q < 0.0 ? -z : z;
}

void check_sigma(double sigma) {
  if (!(sigma > 0.0)) {
    throw DomainError("folded normal: sigma must be positive, got " + std::to_string(sigma));
  }
}

}  // namespace

double std_normal_pdf(double x) noexcept { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double std_normal_cdf(double x) noexcept { return 0.5 * std::erfc(-x * kInvSqrt2); }

double std_normal_sf(double x) noexcept { return 0.5 * std::erfc(x * kInvSqrt2); }

double std_normal_log_cdf(double x) noexcept {
  if (x > 0.0) return std::log1p(-std_normal_sf(x));
  const double cdf = std_normal_cdf(x);
  if (cdf > 0.0) return std::log(cdf);
  // Mills-ratio asymptote once erfc underflows (x < about -38).
  const double x2 = x * x;
  return -0.5 * x2 - std::log(-x) - 0.5 * std::log(2.0 * kPi) +
         std::log1p(-1.0 / x2 + 3.0 / (x2 * x2));
}

double std_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("std_normal_quantile: p must lie in (0, 1), got " + std::to_string(p));
  }
  const double x = quantile_as241(p);
  // One Halley step on whichever tail keeps the residual well conditioned.
  const double residual = p < 0.5 ? std_normal_cdf(x) - p : (1.0 - p) - std_normal_sf(x);
  const double u = residual / std_normal_pdf(x);
  return x - u / (1.0 + 0.5 * x * u);
}

double erf(double x) noexcept { return std::erf(x); }

double erfc(double x) noexcept { return std::erfc(x); }

double folded_normal_cdf(double x, double mu, double sigma) {
  check_sigma(sigma);
  if (x <= 0.0) return 0.0;
  const double m = std::abs(mu);
  const double scale = kInvSqrt2 / sigma;
  const double upper = (x + m) * scale;
  const double lower = (x - m) * scale;
  const double sf = 0.5 * (std::erfc(upper) + std::erfc(lower));
  if (sf <= 0.5) return 1.0 - sf;
  // Small CDF: use erfc differences (lower < 0 here unless both terms are tiny).
  if (lower >= 0.0) return 0.5 * (std::erf(upper) + std::erf(lower));
  return 0.5 * (std::erfc(-lower) - std::erfc(upper));
}

double folded_normal_sf(double x, double mu, double sigma) {
  check_sigma(sigma);
  if (x <= 0.0) return 1.0;
  const double m = std::abs(mu);
  const double scale = kInvSqrt2 / sigma;
  return 0.5 * (std::erfc((x + m) * scale) + std::erfc((x - m) * scale));
}

double folded_normal_log_cdf(double x, double mu, double sigma) {
  check_sigma(sigma);
  if (x <= 0.0) return -std::numeric_limits<double>::infinity();
  const double sf = folded_normal_sf(x, mu, sigma);
  if (sf <= 0.5) return std::log1p(-sf);
  const double cdf = folded_normal_cdf(x, mu, sigma);
  return cdf > 0.0 ? std::log(cdf) : -std::numeric_limits<double>::infinity();
}

double power_from_log(double log_value, double n) noexcept {
  if (std::isinf(log_value) && log_value < 0.0) return 0.0;
  return std::exp(n * log_value);
}

}  // namespace mtc
