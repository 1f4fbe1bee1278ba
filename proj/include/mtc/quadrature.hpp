#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace mtc {

/// Controls for integrals of the form  integral f(z) phi(z) dz  over the real line.
struct QuadratureSettings {
  int node_count = 128;           ///< Gauss-Hermite nodes for the primary rule
  double abs_tolerance = 1e-10;   ///< absolute error target
  double truncation_bound = 8.0;  ///< half-width of the window used by the adaptive fallback

  /// Throws DomainError if node_count < 2, abs_tolerance <= 0 or truncation_bound < 8.
  void validate() const;
};

struct GaussHermiteRule {
  std::vector<double> nodes;    // ascending, symmetric about 0
  std::vector<double> weights;  // for the weight exp(-t^2); sum to sqrt(pi)
};

inline constexpr int kMaxHermiteNodes = 512;

/// k-point Gauss-Hermite rule (Golub-Welsch). Throws DomainError unless 1 <= k <= 512.
GaussHermiteRule gauss_hermite_rule(int k);

/// Shared, immutable copy of gauss_hermite_rule(k); built once per k, thread-safe.
const GaussHermiteRule& cached_gauss_hermite_rule(int k);

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
  bool used_fallback = false;
};

using RealFunction = std::function<double(double)>;

/// Estimate of integral f(z) phi(z) dz with phi the standard normal density.
///
/// Evaluates the Gauss-Hermite rule at node_count and 2*node_count nodes (capped
/// at 512) after the substitution z = t sqrt 2. If the two estimates differ by more
/// than abs_tolerance the integrand is treated as too sharp for a fixed rule and
/// the integral is recomputed by adaptive Gauss-Kronrod panels on
/// [-truncation_bound, truncation_bound]. Throws ConvergenceError if the fallback
/// exhausts its budget of 10^6 evaluations.
QuadratureResult integrate_gaussian_weight_detailed(const RealFunction& f,
                                                    const QuadratureSettings& settings = {});

double integrate_gaussian_weight(const RealFunction& f, const QuadratureSettings& settings = {});

inline constexpr std::size_t kDefaultEvaluationBudget = 1'000'000;

/// Globally adaptive 7/15-point Gauss-Kronrod integration of f over [edges.front(),
/// edges.back()], starting from the panels delimited by `edges` (strictly
/// increasing, at least two entries). Refines the panel with the largest error
/// estimate until the summed estimate is <= abs_tolerance.
/// Throws ConvergenceError when max_evaluations would be exceeded.
QuadratureResult integrate_adaptive(const RealFunction& f, std::span<const double> edges,
                                    double abs_tolerance,
                                    std::size_t max_evaluations = kDefaultEvaluationBudget);

}  // namespace mtc
