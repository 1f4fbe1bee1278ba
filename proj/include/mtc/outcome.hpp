#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mtc/estimator.hpp"

namespace mtc {

enum class Sides { one, two };

std::string_view to_string(Sides sides) noexcept;

/// Standardized z-scores X_1..X_n; n >= 2 and every entry finite.
class TestStatistics {
 public:
  /// Throws DomainError if the invariants do not hold.
  explicit TestStatistics(std::vector<double> values);

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }

  /// X -> -X; turns a lower-tail one-sided problem into the upper-tail one.
  TestStatistics negated() const;

 private:
  std::vector<double> values_;
};

/// Result of a global test over n statistics. Fields that a method does not define
/// (rho for the p-value combiners, the critical value for combiners without a
/// per-test threshold) are left empty.
struct GlobalTestOutcome {
  std::string method;
  Sides sides = Sides::two;
  double m_stat = 0.0;  // max |X_i|, max X_i, or the combiner's statistic
  std::optional<std::size_t> argmax_index;
  std::optional<double> rho_used;
  std::optional<CorrelationEstimate> estimate;
  double p_value = 1.0;
  double alpha = 0.05;
  std::optional<double> critical_value;
  std::vector<std::size_t> significant_indices;
  bool reject_global = false;
};

}  // namespace mtc
