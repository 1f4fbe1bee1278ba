#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "mtc/errors.hpp"
#include "mtc/estimator.hpp"
#include "mtc/simulation.hpp"

TEST(SampleVariance, HandComputedCases) {
  EXPECT_DOUBLE_EQ(mtc::sample_variance(std::vector<double>{0.0, 1.0}), 0.5);
  EXPECT_DOUBLE_EQ(mtc::sample_variance(std::vector<double>{0.0, 2.0}), 2.0);
  EXPECT_EQ(mtc::sample_variance(std::vector<double>(9, 3.7)), 0.0);
  EXPECT_THROW(mtc::sample_variance(std::vector<double>{1.0}), mtc::DomainError);
}

TEST(SampleVariance, MatchesTwoPassReference) {
  std::mt19937_64 gen(5);
  std::normal_distribution<double> d(100.0, 2.0);
  for (std::size_t n : {2u, 3u, 7u, 64u, 1001u}) {
    std::vector<double> x(n);
    for (double& v : x) v = d(gen);
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= n;
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    EXPECT_NEAR(mtc::sample_variance(x), ss / (n - 1), 1e-12 * ss / (n - 1));
  }
}

TEST(EstimateRho, DirectFormulaBelowOne) {
  // Two values with s^2 = 0.5.
  auto e = mtc::estimate_rho_mom(std::vector<double>{0.0, 1.0});
  EXPECT_DOUBLE_EQ(e.rho_hat, 0.5);
  EXPECT_DOUBLE_EQ(e.sample_variance, 0.5);
  EXPECT_FALSE(e.indicator_fired);
  EXPECT_FALSE(e.upper_clipped);
}

TEST(EstimateRho, IndicatorAtOrAboveOne) {
  // s^2 = 1.3 for (0, sqrt(2.6)).
  auto e = mtc::estimate_rho_mom(std::vector<double>{0.0, std::sqrt(2.6)});
  EXPECT_NEAR(e.sample_variance, 1.3, 1e-15);
  EXPECT_EQ(e.rho_hat, 0.0);
  EXPECT_TRUE(e.indicator_fired);
}

TEST(EstimateRho, ConstantVectorClipsAtUpperBound) {
  auto e = mtc::estimate_rho_mom(std::vector<double>(5, -1.25));
  EXPECT_EQ(e.rho_hat, mtc::kRhoMax);
  EXPECT_TRUE(e.upper_clipped);
  EXPECT_FALSE(e.indicator_fired);
}

TEST(EstimateRho, InvariantsOnRandomInputs) {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> scale(0.05, 2.0);
  std::normal_distribution<double> z;
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> x(2 + trial % 40);
    const double s = scale(gen);
    for (double& v : x) v = s * z(gen);
    auto e = mtc::estimate_rho_mom(x);
    ASSERT_GE(e.rho_hat, 0.0);
    ASSERT_LE(e.rho_hat, mtc::kRhoMax);
    if (e.indicator_fired) ASSERT_EQ(e.rho_hat, 0.0);
    if (!e.indicator_fired && !e.upper_clipped) ASSERT_EQ(e.rho_hat, 1.0 - e.sample_variance);
  }
}

TEST(EstimateRho, LocationInvariant) {
  std::vector<double> x{0.3, -0.2, 0.9, 0.1, -0.5};
  auto base = mtc::estimate_rho_mom(x);
  for (double& v : x) v += 2.0;
  EXPECT_NEAR(mtc::estimate_rho_mom(x).rho_hat, base.rho_hat, 1e-14);
}

TEST(EstimateRho, ClampRho) {
  EXPECT_EQ(mtc::clamp_rho(-0.3), 0.0);
  EXPECT_EQ(mtc::clamp_rho(0.4), 0.4);
  EXPECT_EQ(mtc::clamp_rho(1.0), mtc::kRhoMax);
}

namespace {

double rmse_of_estimator(std::size_t n, double rho, std::size_t reps, std::uint64_t seed) {
  mtc::ExchangeableModel model{n, rho, {}};
  std::vector<double> x(n), scratch(n);
  double ss = 0.0;
  for (std::size_t r = 0; r < reps; ++r) {
    mtc::NormalStream stream(mtc::derive_stream_key(seed, n, r));
    mtc::sample_exchangeable(model, stream, x, scratch);
    const double err = mtc::estimate_rho_mom(x).rho_hat - rho;
    ss += err * err;
  }
  return std::sqrt(ss / reps);
}

}  // namespace

TEST(EstimateRho, RmseMatchesChiSquareTheory) {
  // s^2 = (1 - rho) S^2 with (n-1) S^2 ~ chi^2_{n-1}, so the estimator's SD is
  // (1 - rho) sqrt(2 / (n - 1)) while the indicator is inactive.
  const double rho = 0.5;
  for (std::size_t n : {250u, 1000u}) {
    const double theory = (1.0 - rho) * std::sqrt(2.0 / (n - 1));
    EXPECT_NEAR(rmse_of_estimator(n, rho, 2000, 3) / theory, 1.0, 0.08) << n;
  }
}

TEST(EstimateRho, RmseShrinksAtRootNRate) {
  const double a = rmse_of_estimator(250, 0.5, 1000, 8);
  const double b = rmse_of_estimator(4000, 0.5, 1000, 8);
  EXPECT_GE(a / b, 3.2);
  EXPECT_LE(a / b, 4.8);
}

TEST(EstimateRho, IndependentDataMostlyFiresIndicatorNearZero) {
  const double rmse = rmse_of_estimator(1000, 0.0, 1000, 21);
  // Half-normal error of scale sqrt(2/999).
  EXPECT_NEAR(rmse, std::sqrt(2.0 / 999.0) / std::sqrt(2.0), 0.01);
}
