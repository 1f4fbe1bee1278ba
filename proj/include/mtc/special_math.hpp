#pragma once

// Scalar distribution functions for the standard normal and folded normal.

namespace mtc {

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kSqrt2 = 1.414213562373095048801688724209698079;
inline constexpr double kSqrtPi = 1.772453850905516027298167483341145182;
inline constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934381868;

double std_normal_pdf(double x) noexcept;

/// Phi(x). Evaluated through erfc so both tails keep full relative accuracy.
double std_normal_cdf(double x) noexcept;

/// 1 - Phi(x), without cancellation for large x.
double std_normal_sf(double x) noexcept;

/// log Phi(x); finite for every finite x.
double std_normal_log_cdf(double x) noexcept;

/// Inverse of Phi (Wichura's AS241 followed by one Halley correction).
/// Throws DomainError unless 0 < p < 1.
double std_normal_quantile(double p);

double erf(double x) noexcept;
double erfc(double x) noexcept;

/// CDF of |Y| for Y ~ N(mu, sigma^2):
///   0.5 * [erf((x + mu) / (sigma sqrt 2)) + erf((x - mu) / (sigma sqrt 2))],
/// and 0 for x <= 0. Depends on mu only through |mu|.
/// Throws DomainError for sigma <= 0.
double folded_normal_cdf(double x, double mu, double sigma);

/// 1 - folded_normal_cdf, computed directly from the two erfc terms.
double folded_normal_sf(double x, double mu, double sigma);

/// log of folded_normal_cdf; -infinity where the CDF is zero.
double folded_normal_log_cdf(double x, double mu, double sigma);

/// exp(n * log_value), with log_value == -inf mapping to 0. Used for the n-th
/// power of a CDF at large n, where direct powering underflows.
double power_from_log(double log_value, double n) noexcept;

}  // namespace mtc
