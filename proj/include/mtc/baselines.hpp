#pragma once

// Comparator global tests that combine per-test p-values.

#include <span>
#include <vector>

#include "mtc/outcome.hpp"

namespace mtc {

inline constexpr double kMinPValue = 1e-300;

/// Per-test p-values, each in (0, 1], n >= 1.
class PValueVector {
 public:
  /// Throws DomainError if a value lies outside (0, 1] or the vector is empty.
  explicit PValueVector(std::vector<double> values);

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }

 private:
  std::vector<double> values_;
};

/// Two-sided p_i = 2(1 - Phi(|X_i|)); one-sided p_i = 1 - Phi(X_i).
/// Results are clamped to [kMinPValue, 1].
PValueVector z_to_p(const TestStatistics& x, Sides sides);

/// Same conversion into a caller-provided buffer (out.size() == z.size()).
void z_to_p(std::span<const double> z, Sides sides, std::span<double> out);

// Scalar statistics and global p-values on raw spans (used by the simulation loop).
double bonferroni_p(std::span<const double> p);
double harmonic_mean_p(std::span<const double> p);
/// Landau-calibrated p-value of the harmonic mean:
///   P(Y > 1/HMP - log n - 0.874367040387922), Y standard Landau.
double hmp_adjusted_p(std::span<const double> p);
/// Upper chi-squared(2n) tail at T = -2 sum log p_i.
double fisher_p(std::span<const double> p);

inline constexpr double kHmpLandauShift = 0.874367040387922;  // 1 + digamma(1) + log(pi/2)

double harmonic_mean_p(const PValueVector& p);

/// Global p = min(1, n min p_i); rejects iff some p_i <= alpha / n, and flags those.
GlobalTestOutcome bonferroni_test(const PValueVector& p, double alpha);

/// Unadjusted harmonic-mean test: rejects iff HMP <= alpha.
GlobalTestOutcome hmp_test(const PValueVector& p, double alpha);

GlobalTestOutcome hmp_adjusted_test(const PValueVector& p, double alpha);

GlobalTestOutcome fisher_combined_test(const PValueVector& p, double alpha);

}  // namespace mtc
