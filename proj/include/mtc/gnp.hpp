#pragma once

// Global test for the maximum of jointly normal, exchangeable, standardized
// statistics with common correlation rho. Writing X_i = sqrt(rho) Z_0 +
// sqrt(1 - rho) Z_i and conditioning on Z_0 = z gives
//
//   P(max |X_i| <= m) = integral F(m | sqrt(rho) z, sqrt(1 - rho))^n phi(z) dz,
//
// with F the folded-normal CDF. The one-sided analogue replaces F by
// Phi((z sqrt(rho) + m) / sqrt(1 - rho)).

#include <cstddef>
#include <optional>
#include <vector>

#include "mtc/kernels.hpp"
#include "mtc/outcome.hpp"
#include "mtc/quadrature.hpp"

namespace mtc {

using ArgMax = kernels::MaxResult;

/// max_i |X_i| and the first index attaining it.
ArgMax max_abs_statistic(const TestStatistics& x) noexcept;

/// max_i X_i and the first index attaining it.
ArgMax max_statistic(const TestStatistics& x) noexcept;

/// P(max |X_i| >= m) under the global null. rho is clamped to [0, kRhoMax].
/// Returns exactly 1 at m = 0. Throws DomainError for m < 0 or n == 0.
double global_p_two_sided(double m, std::size_t n, double rho,
                          const QuadratureSettings& settings = {});

/// P(max X_i >= m) under the global null. rho is clamped to [0, kRhoMax].
double global_p_one_sided(double m, std::size_t n, double rho,
                          const QuadratureSettings& settings = {});

double global_p(double m, std::size_t n, double rho, Sides sides,
                const QuadratureSettings& settings = {});

inline constexpr double kCriticalValueTolerance = 1e-9;

/// Threshold c with global_p(c) = alpha, by bracketing root search on [0, 40]
/// (two-sided) or [-10, 40] (one-sided). Throws DomainError unless 0 < alpha < 1.
double critical_value(std::size_t n, double rho, double alpha, Sides sides,
                      const QuadratureSettings& settings = {});

/// Indices i with |X_i| >= c (two-sided) or X_i >= c (one-sided), ascending.
std::vector<std::size_t> select_significant(const TestStatistics& x, double c, Sides sides);

struct GnpPValue {
  double p_value;
  double m_stat;
  std::size_t argmax_index;
  double rho_used;
  CorrelationEstimate estimate;
};

/// p-value of the max statistic with rho estimated by estimate_rho_mom, or taken
/// from rho_override when given. Skips the critical-value solve.
GnpPValue gnp_mom_p_value(std::span<const double> x, Sides sides,
                          const QuadratureSettings& settings = {},
                          std::optional<double> rho_override = std::nullopt);

/// Full procedure: estimate rho, compute the global p-value and critical value, and
/// flag the individual statistics at or beyond it. reject_global is decided by
/// p_value <= alpha; when it holds the argmax index is always reported significant.
GlobalTestOutcome run_gnp_mom_test(const TestStatistics& x, double alpha, Sides sides,
                                   const QuadratureSettings& settings = {},
                                   std::optional<double> rho_override = std::nullopt);

}  // namespace mtc
