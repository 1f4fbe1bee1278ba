#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <random>
#include <vector>

#include "mtc/baselines.hpp"
#include "mtc/errors.hpp"
#include "mtc/landau.hpp"

namespace {

mtc::PValueVector pv(std::vector<double> v) { return mtc::PValueVector(std::move(v)); }

std::vector<double> random_p(std::mt19937_64& gen, std::size_t n) {
  std::uniform_real_distribution<double> u(1e-6, 1.0);
  std::vector<double> p(n);
  for (double& v : p) v = u(gen);
  return p;
}

}  // namespace

TEST(PValueVectorType, Invariants) {
  EXPECT_THROW(pv({}), mtc::DomainError);
  EXPECT_THROW(pv({0.0}), mtc::DomainError);
  EXPECT_THROW(pv({1.2}), mtc::DomainError);
  EXPECT_NO_THROW(pv({1.0}));
}

TEST(ZToP, KnownValues) {
  std::vector<double> z{0.0, 1.959963984540054, 1.6448536269514722, -1.959963984540054, 40.0};
  std::vector<double> two(z.size()), one(z.size());
  mtc::z_to_p(z, mtc::Sides::two, two);
  mtc::z_to_p(z, mtc::Sides::one, one);
  EXPECT_EQ(two[0], 1.0);
  EXPECT_NEAR(two[1], 0.05, 1e-15);
  EXPECT_NEAR(two[3], 0.05, 1e-15);
  EXPECT_NEAR(one[2], 0.05, 1e-15);
  EXPECT_NEAR(one[3], 0.975, 1e-15);
  EXPECT_EQ(two[4], mtc::kMinPValue);
  auto pvv = mtc::z_to_p(mtc::TestStatistics({0.0, 1.959963984540054}), mtc::Sides::two);
  EXPECT_NEAR(pvv.values()[1], 0.05, 1e-15);
}

TEST(Bonferroni, Examples) {
  auto out = mtc::bonferroni_test(pv({0.001, 0.5}), 0.05);
  EXPECT_TRUE(out.reject_global);
  EXPECT_DOUBLE_EQ(out.p_value, 0.002);
  EXPECT_EQ(out.significant_indices, (std::vector<std::size_t>{0}));
  EXPECT_EQ(out.argmax_index.value(), 0u);
  auto none = mtc::bonferroni_test(pv({1.0, 1.0, 1.0}), 0.05);
  EXPECT_EQ(none.p_value, 1.0);
  EXPECT_FALSE(none.reject_global);
  auto single = mtc::bonferroni_test(pv({0.03}), 0.05);
  EXPECT_EQ(single.p_value, 0.03);
  EXPECT_TRUE(single.reject_global);
}

TEST(Bonferroni, DecisionMatchesPerTestThreshold) {
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 200; ++trial) {
    auto p = random_p(gen, 1 + trial % 30);
    auto out = mtc::bonferroni_test(pv(p), 0.1);
    bool any = false;
    for (double v : p) any |= v <= 0.1 / p.size();
    ASSERT_EQ(out.reject_global, any);
    ASSERT_EQ(out.reject_global, !out.significant_indices.empty());
  }
}

TEST(HarmonicMean, Examples) {
  EXPECT_DOUBLE_EQ(mtc::harmonic_mean_p(pv({0.3, 0.3, 0.3})), 0.3);
  EXPECT_NEAR(mtc::harmonic_mean_p(pv({0.01, 1.0})), 2.0 / 101.0, 1e-16);
}

TEST(HarmonicMean, BelowGeometricAndArithmeticMeans) {
  std::mt19937_64 gen(4);
  for (int trial = 0; trial < 300; ++trial) {
    auto p = random_p(gen, 2 + trial % 50);
    double lg = 0.0, am = 0.0;
    for (double v : p) {
      lg += std::log(v);
      am += v;
    }
    const double h = mtc::harmonic_mean_p(pv(p));
    ASSERT_LE(h, std::exp(lg / p.size()) * (1.0 + 1e-12));
    ASSERT_LE(h, am / p.size());
  }
}

TEST(HmpTests, RawDecision) {
  auto out = mtc::hmp_test(pv({0.01, 1.0}), 0.05);
  EXPECT_NEAR(out.p_value, 2.0 / 101.0, 1e-16);
  EXPECT_TRUE(out.reject_global);
  EXPECT_EQ(out.method, "hmp");
}

TEST(HmpAdjusted, MatchesLandauFormula) {
  std::vector<double> p{0.002, 0.3, 0.7, 0.05};
  const double h = mtc::harmonic_mean_p(pv(p));
  const double expect = mtc::landau_sf(1.0 / h - std::log(4.0) - mtc::kHmpLandauShift);
  EXPECT_NEAR(mtc::hmp_adjusted_p(p), expect, 1e-15);
  EXPECT_NEAR(mtc::kHmpLandauShift, 1.0 - 0.5772156649015329 + std::log(M_PI / 2.0), 1e-15);
}

TEST(HmpAdjusted, SingleSmallPValueIsNearlyUnchanged) {
  for (double p : {1e-4, 1e-3, 0.01, 0.03, 0.05}) {
    auto out = mtc::hmp_adjusted_test(pv({p}), 0.05);
    EXPECT_NEAR(out.p_value, p, 0.01) << p;
  }
}

TEST(HmpAdjusted, SingleTestAgreesWithSimulatedNullCalibration) {
  // For n = 1 under the null, P(adjusted p <= t) should be close to t for small t.
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int draws = 1'000'000;
  int below = 0;
  for (int i = 0; i < draws; ++i) {
    std::vector<double> p{std::max(u(gen), 1e-300)};
    below += mtc::hmp_adjusted_p(p) <= 0.01;
  }
  const double rate = static_cast<double>(below) / draws;
  EXPECT_NEAR(rate, 0.01, 0.01);
}

TEST(HmpAdjusted, InflatesRawHarmonicMean) {
  std::mt19937_64 gen(6);
  for (int trial = 0; trial < 300; ++trial) {
    auto p = random_p(gen, 2 + trial % 200);
    ASSERT_GE(mtc::hmp_adjusted_p(p), mtc::harmonic_mean_p(pv(p))) << trial;
  }
}

TEST(Fisher, ExamplesAndChiSquareOracle) {
  EXPECT_NEAR(mtc::fisher_combined_test(pv({0.05}), 0.05).p_value, 0.05, 1e-15);
  EXPECT_EQ(mtc::fisher_combined_test(pv({1.0, 1.0}), 0.05).p_value, 1.0);
  std::mt19937_64 gen(10);
  for (int trial = 0; trial < 50; ++trial) {
    auto p = random_p(gen, 1 + trial * 7);
    double t = 0.0;
    for (double v : p) t -= 2.0 * std::log(v);
    boost::math::chi_squared_distribution<> chi(2.0 * p.size());
    const double ref = boost::math::cdf(boost::math::complement(chi, t));
    ASSERT_NEAR(mtc::fisher_p(p), ref, 1e-12 * std::max(ref, 1e-3));
  }
}

TEST(Combiners, MethodIdsAndBounds) {
  auto p = pv({0.2, 0.4, 0.9});
  EXPECT_EQ(mtc::bonferroni_test(p, 0.05).method, "bonferroni");
  EXPECT_EQ(mtc::hmp_adjusted_test(p, 0.05).method, "hmp-adj");
  EXPECT_EQ(mtc::fisher_combined_test(p, 0.05).method, "fisher");
  for (const auto& out : {mtc::bonferroni_test(p, 0.05), mtc::hmp_test(p, 0.05),
                          mtc::hmp_adjusted_test(p, 0.05), mtc::fisher_combined_test(p, 0.05)}) {
    EXPECT_GE(out.p_value, 0.0);
    EXPECT_LE(out.p_value, 1.0);
    EXPECT_FALSE(out.reject_global);
  }
}
