#pragma once

namespace mtc {

/// Upper tail P(Y > x) of the standard Landau distribution, the law with density
///   (1/pi) * integral_0^inf exp(-t log t - x t) sin(pi t) dt.
///
/// Evaluated through Zolotarev's finite-interval representation of the totally
/// skewed alpha = 1 stable law, which has a bounded, non-oscillating integrand.
/// Relative accuracy is about 1e-10; beyond x = 1e12 the 1/x asymptote is used.
double landau_sf(double x);

/// P(Y <= x) for the standard Landau distribution.
double landau_cdf(double x);

}  // namespace mtc
