#pragma once

#include <span>

namespace mtc {

/// Largest correlation handed to downstream code; keeps sqrt(1 - rho) away from 0.
inline constexpr double kRhoMax = 1.0 - 1e-8;

struct CorrelationEstimate {
  double rho_hat = 0.0;
  double sample_variance = 0.0;
  bool indicator_fired = false;  // s^2 >= 1, estimate forced to 0
  bool upper_clipped = false;    // 1 - s^2 exceeded kRhoMax
};

/// Unbiased sample variance, sum (x_i - mean)^2 / (n - 1). Throws DomainError for n < 2.
double sample_variance(std::span<const double> x);

/// Method-of-moments estimate of a common pairwise correlation from one vector of
/// standardized statistics: rho_hat = (1 - s^2) when s^2 < 1, else 0, clamped to
/// [0, kRhoMax]. Throws DomainError for n < 2.
CorrelationEstimate estimate_rho_mom(std::span<const double> x);

/// Clamp a correlation into [0, kRhoMax].
double clamp_rho(double rho) noexcept;

}  // namespace mtc
