#include "mtc/estimator.hpp"

#include <algorithm>
#include <string>

#include "mtc/errors.hpp"
#include "mtc/kernels.hpp"

namespace mtc {

double sample_variance(std::span<const double> x) {
  if (x.size() < 2) {
    throw DomainError("sample_variance: need at least 2 values, got " + std::to_string(x.size()));
  }
  // The rounded mean of a constant vector can differ from its entries.
  if (std::all_of(x.begin() + 1, x.end(), [&](double v) { return v == x[0]; })) return 0.0;
  const double n = static_cast<double>(x.size());
  const double mean = kernels::sum(x) / n;
  return kernels::centered_sum_squares(x, mean) / (n - 1.0);
}

CorrelationEstimate estimate_rho_mom(std::span<const double> x) {
  CorrelationEstimate est;
  est.sample_variance = sample_variance(x);
  if (est.sample_variance >= 1.0) {
    est.indicator_fired = true;
    est.rho_hat = 0.0;
    return est;
  }
  est.rho_hat = 1.0 - est.sample_variance;
  if (est.rho_hat > kRhoMax) {
    est.rho_hat = kRhoMax;
    est.upper_clipped = true;
  }
  return est;
}

double clamp_rho(double rho) noexcept { return std::clamp(rho, 0.0, kRhoMax); }

}  // namespace mtc
