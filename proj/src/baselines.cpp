#include "mtc/baselines.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <string>

#include "mtc/errors.hpp"
#include "mtc/kernels.hpp"
#include "mtc/landau.hpp"
#include "mtc/special_math.hpp"

namespace mtc {

PValueVector::PValueVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw DomainError("PValueVector: empty");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!(values_[i] > 0.0 && values_[i] <= 1.0)) {
      throw DomainError("PValueVector: entry " + std::to_string(i) + " outside (0, 1]");
    }
  }
}

void z_to_p(std::span<const double> z, Sides sides, std::span<double> out) {
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double p = sides == Sides::two ? 2.0 * std_normal_sf(std::abs(z[i])) : std_normal_sf(z[i]);
    out[i] = std::clamp(p, kMinPValue, 1.0);
  }
}

PValueVector z_to_p(const TestStatistics& x, Sides sides) {
  std::vector<double> p(x.size());
  z_to_p(x.values(), sides, p);
  return PValueVector(std::move(p));
}

double bonferroni_p(std::span<const double> p) {
  const double smallest = *std::min_element(p.begin(), p.end());
  return std::min(1.0, static_cast<double>(p.size()) * smallest);
}

double harmonic_mean_p(std::span<const double> p) {
  return static_cast<double>(p.size()) / kernels::reciprocal_sum(p);
}

double harmonic_mean_p(const PValueVector& p) { return harmonic_mean_p(p.values()); }

double hmp_adjusted_p(std::span<const double> p) {
  const double hmp = harmonic_mean_p(p);
  const double location = std::log(static_cast<double>(p.size())) + kHmpLandauShift;
  return std::clamp(landau_sf(1.0 / hmp - location), 0.0, 1.0);
}

double fisher_p(std::span<const double> p) {
  double log_sum = 0.0;
  for (double v : p) log_sum += std::log(v);
  const double half_statistic = -log_sum;  // T / 2
  if (half_statistic <= 0.0) return 1.0;
  return boost::math::gamma_q(static_cast<double>(p.size()), half_statistic);
}

namespace {

GlobalTestOutcome combiner_outcome(const char* method, double statistic, double p_value,
                                   double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError(std::string(method) + ": alpha must lie in (0, 1)");
  }
  GlobalTestOutcome out;
  out.method = method;
  out.m_stat = statistic;
  out.p_value = p_value;
  out.alpha = alpha;
  out.reject_global = p_value <= alpha;
  return out;
}

}  // namespace

GlobalTestOutcome bonferroni_test(const PValueVector& p, double alpha) {
  const auto values = p.values();
  const auto smallest = std::min_element(values.begin(), values.end());
  GlobalTestOutcome out = combiner_outcome("bonferroni", *smallest, bonferroni_p(values), alpha);
  out.argmax_index = static_cast<std::size_t>(smallest - values.begin());
  const double threshold = alpha / static_cast<double>(values.size());
  out.critical_value = threshold;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] <= threshold) out.significant_indices.push_back(i);
  }
  out.reject_global = !out.significant_indices.empty();
  return out;
}

GlobalTestOutcome hmp_test(const PValueVector& p, double alpha) {
  const double hmp = harmonic_mean_p(p);
  return combiner_outcome("hmp", hmp, hmp, alpha);
}

GlobalTestOutcome hmp_adjusted_test(const PValueVector& p, double alpha) {
  return combiner_outcome("hmp-adj", harmonic_mean_p(p), hmp_adjusted_p(p.values()), alpha);
}

GlobalTestOutcome fisher_combined_test(const PValueVector& p, double alpha) {
  double log_sum = 0.0;
  for (double v : p.values()) log_sum += std::log(v);
  return combiner_outcome("fisher", -2.0 * log_sum, fisher_p(p.values()), alpha);
}

}  // namespace mtc
