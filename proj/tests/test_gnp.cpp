#include <gtest/gtest.h>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <random>
#include <vector>

#include "mtc/errors.hpp"
#include "mtc/gnp.hpp"
#include "mtc/special_math.hpp"

namespace {

const boost::math::normal_distribution<> kStd;

double phi_cdf(double x) { return boost::math::cdf(kStd, x); }

// Independent evaluation of P(max |X_i| >= m) by adaptive Gauss-Kronrod over the
// common factor, written directly from the conditional-independence model.
double two_sided_by_kronrod(double m, std::size_t n, double rho) {
  const double a = std::sqrt(rho);
  const double b = std::sqrt(1.0 - rho);
  auto integrand = [&](double z) {
    const double inside = phi_cdf((m - a * z) / b) - phi_cdf((-m - a * z) / b);
    return std::pow(inside, static_cast<double>(n)) * boost::math::pdf(kStd, z);
  };
  return 1.0 - boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, -12.0, 12.0,
                                                                              25, 1e-14);
}

double one_sided_by_kronrod(double m, std::size_t n, double rho) {
  const double a = std::sqrt(rho);
  const double b = std::sqrt(1.0 - rho);
  auto integrand = [&](double z) {
    return std::pow(phi_cdf((m - a * z) / b), static_cast<double>(n)) * boost::math::pdf(kStd, z);
  };
  return 1.0 - boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, -12.0, 12.0,
                                                                              25, 1e-14);
}

struct McResult {
  double p;
  double se;
};

// Brute-force simulation of the exchangeable null with std::mt19937_64.
McResult brute_force(double m, std::size_t n, double rho, bool two_sided, std::size_t reps,
                     std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> z;
  const double a = std::sqrt(rho);
  const double b = std::sqrt(1.0 - rho);
  std::size_t hits = 0;
  for (std::size_t r = 0; r < reps; ++r) {
    const double common = a * z(gen);
    double best = -INFINITY;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = common + b * z(gen);
      best = std::max(best, two_sided ? std::abs(x) : x);
    }
    hits += best >= m;
  }
  const double p = static_cast<double>(hits) / reps;
  return {p, std::sqrt(p * (1.0 - p) / reps)};
}

mtc::TestStatistics stats(std::vector<double> v) { return mtc::TestStatistics(std::move(v)); }

}  // namespace

TEST(MaxStatistic, ExamplesAndTies) {
  auto a = mtc::max_abs_statistic(stats({1.0, -3.0, 2.0}));
  EXPECT_EQ(a.value, 3.0);
  EXPECT_EQ(a.index, 1u);
  EXPECT_EQ(mtc::max_abs_statistic(stats({0.0, 0.0})).value, 0.0);
  EXPECT_EQ(mtc::max_abs_statistic(stats({-2.0, 2.0})).index, 0u);
  EXPECT_EQ(mtc::max_statistic(stats({-5.0, 1.0, 1.0})).index, 1u);
}

TEST(TestStatisticsType, Invariants) {
  EXPECT_THROW(stats({1.0}), mtc::DomainError);
  EXPECT_THROW(stats({1.0, NAN}), mtc::DomainError);
  EXPECT_THROW(stats({1.0, INFINITY}), mtc::DomainError);
  EXPECT_EQ(stats({1.0, -2.0}).negated()[1], 2.0);
}

TEST(GlobalP, IndependenceCollapseTwoSided) {
  for (std::size_t n : {1u, 10u, 100u, 1000u}) {
    for (double m = 0.0; m <= 6.0; m += 0.5) {
      const double exact = 1.0 - std::pow(2.0 * phi_cdf(m) - 1.0, static_cast<double>(n));
      EXPECT_NEAR(mtc::global_p_two_sided(m, n, 0.0), exact, 1e-12) << n << " " << m;
    }
  }
  EXPECT_NEAR(mtc::global_p_two_sided(1.959963984540054, 1, 0.0), 0.05, 1e-14);
  EXPECT_EQ(mtc::global_p_two_sided(0.0, 50, 0.3), 1.0);
}

TEST(GlobalP, IndependenceCollapseOneSided) {
  for (std::size_t n : {1u, 7u, 300u}) {
    for (double m = -2.0; m <= 6.0; m += 0.5) {
      const double exact = 1.0 - std::pow(phi_cdf(m), static_cast<double>(n));
      EXPECT_NEAR(mtc::global_p_one_sided(m, n, 0.0), exact, 1e-12) << n << " " << m;
    }
  }
  EXPECT_NEAR(mtc::global_p_one_sided(1.6448536269514722, 1, 0.0), 0.05, 1e-14);
}

TEST(GlobalP, MatchesIndependentKronrodEvaluation) {
  for (std::size_t n : {2u, 20u, 100u, 1000u}) {
    for (double rho : {0.05, 0.2, 0.5, 0.9, 0.99}) {
      for (double m : {1.0, 2.5, 3.5, 4.5}) {
        EXPECT_NEAR(mtc::global_p_two_sided(m, n, rho), two_sided_by_kronrod(m, n, rho), 1e-9)
            << n << " " << rho << " " << m;
        EXPECT_NEAR(mtc::global_p_one_sided(m, n, rho), one_sided_by_kronrod(m, n, rho), 1e-9)
            << n << " " << rho << " " << m;
      }
    }
  }
}

TEST(GlobalP, AgreesWithBruteForceSimulationTwoSided) {
  const double p = mtc::global_p_two_sided(3.0, 100, 0.5);
  auto mc = brute_force(3.0, 100, 0.5, true, 1'000'000, 2024);
  EXPECT_NEAR(p, mc.p, 4.0 * mc.se);
}

TEST(GlobalP, AgreesWithBruteForceSimulationOneSided) {
  const double p = mtc::global_p_one_sided(2.5, 50, 0.2);
  auto mc = brute_force(2.5, 50, 0.2, false, 1'000'000, 77);
  EXPECT_NEAR(p, mc.p, 4.0 * mc.se);
}

TEST(GlobalP, DecreasingInThresholdAndIncreasingInN) {
  for (double rho : {0.0, 0.3, 0.8}) {
    double prev = 1.0;
    for (double m = 0.0; m <= 6.0; m += 0.05) {
      const double p = mtc::global_p_two_sided(m, 200, rho);
      ASSERT_LE(p, prev + 1e-12) << rho << " " << m;
      ASSERT_GE(p, 0.0);
      prev = p;
    }
    double prev_n = 0.0;
    for (std::size_t n : {1u, 2u, 5u, 50u, 500u, 5000u}) {
      const double p = mtc::global_p_two_sided(3.0, n, rho);
      ASSERT_GE(p, prev_n - 1e-12);
      prev_n = p;
    }
  }
}

TEST(GlobalP, DecreasingInCorrelation) {
  // Positive dependence among the |X_i| lowers the chance that any one is large.
  for (double m : {2.0, 3.0, 4.0}) {
    double prev = 1.0;
    for (double rho = 0.0; rho < 0.999; rho += 0.02) {
      const double p = mtc::global_p_two_sided(m, 500, rho);
      ASSERT_LE(p, prev + 1e-10) << m << " " << rho;
      prev = p;
    }
  }
}

TEST(GlobalP, ContinuousInCorrelation) {
  for (double rho : {0.0, 0.25, 0.5, 0.75, 0.95}) {
    const double a = mtc::global_p_two_sided(3.2, 1000, rho);
    const double b = mtc::global_p_two_sided(3.2, 1000, rho + 1e-6);
    EXPECT_LT(std::abs(a - b), 1e-4) << rho;
  }
}

TEST(GlobalP, PerfectCorrelationLimit) {
  // As rho -> 1 every X_i collapses onto the common factor. The residual spread of
  // n independent N(0, 1 - rho) terms vanishes more slowly for large n, so the
  // 0.01 agreement at rho = 0.999 is checked for small n and convergence for large n.
  for (double m : {1.0, 2.0, 3.0}) {
    const double single = 2.0 * (1.0 - phi_cdf(m));
    EXPECT_NEAR(mtc::global_p_two_sided(m, 2, 0.999), single, 0.01) << m;
    double prev_gap = INFINITY;
    for (double rho : {0.99, 0.999, 0.99999, 1.0}) {
      const double gap = std::abs(mtc::global_p_two_sided(m, 1000, rho) - single);
      EXPECT_LT(gap, prev_gap) << m << " " << rho;
      prev_gap = gap;
    }
    EXPECT_LT(prev_gap, 1e-3) << m;
  }
}

TEST(GlobalP, OneAndTwoSidedCoherence) {
  for (double rho : {0.0, 0.4, 0.9}) {
    for (double m : {1.5, 2.5, 3.5}) {
      const double one = mtc::global_p_one_sided(m, 100, rho);
      const double two = mtc::global_p_two_sided(m, 100, rho);
      EXPECT_LE(one, two + 1e-12);
      EXPECT_LE(two, 2.0 * one + 1e-12);
    }
  }
}

TEST(GlobalP, DomainErrors) {
  EXPECT_THROW(mtc::global_p_two_sided(-0.1, 10, 0.0), mtc::DomainError);
  EXPECT_THROW(mtc::global_p_two_sided(1.0, 0, 0.0), mtc::DomainError);
}

TEST(CriticalValue, SidakClosedForm) {
  for (std::size_t n : {1u, 2u, 20u, 1000u}) {
    for (double alpha : {0.01, 0.05, 0.10}) {
      const double exact =
          boost::math::quantile(kStd, 0.5 * (1.0 + std::pow(1.0 - alpha, 1.0 / n)));
      EXPECT_NEAR(mtc::critical_value(n, 0.0, alpha, mtc::Sides::two), exact, 1e-8) << n << " " << alpha;
      const double exact_one = boost::math::quantile(kStd, std::pow(1.0 - alpha, 1.0 / n));
      EXPECT_NEAR(mtc::critical_value(n, 0.0, alpha, mtc::Sides::one), exact_one, 1e-8);
    }
  }
  EXPECT_NEAR(mtc::critical_value(1, 0.0, 0.05, mtc::Sides::two), 1.959963984540054, 1e-9);
}

TEST(CriticalValue, RoundTripAcrossGrid) {
  for (std::size_t n : {2u, 20u, 100u, 1000u}) {
    for (double rho : {0.0, 0.2, 0.5, 0.9, 0.99}) {
      for (double alpha : {0.01, 0.05, 0.10}) {
        for (auto sides : {mtc::Sides::two, mtc::Sides::one}) {
          const double c = mtc::critical_value(n, rho, alpha, sides);
          EXPECT_NEAR(mtc::global_p(c, n, rho, sides), alpha, 2e-9) << n << " " << rho << " " << alpha;
        }
      }
    }
  }
}

TEST(CriticalValue, MonotoneInAlphaAndRho) {
  double prev = INFINITY;
  for (double alpha : {0.001, 0.01, 0.05, 0.1, 0.2, 0.5}) {
    const double c = mtc::critical_value(300, 0.3, alpha, mtc::Sides::two);
    EXPECT_LT(c, prev);
    prev = c;
  }
  prev = INFINITY;
  for (double rho : {0.0, 0.3, 0.6, 0.9}) {
    const double c = mtc::critical_value(300, rho, 0.05, mtc::Sides::two);
    EXPECT_LT(c, prev);
    prev = c;
  }
}

TEST(CriticalValue, SimulatedExceedanceMatchesAlpha) {
  const double c = mtc::critical_value(1000, 0.5, 0.10, mtc::Sides::two);
  auto mc = brute_force(c, 1000, 0.5, true, 100'000, 5);
  EXPECT_NEAR(mc.p, 0.10, 3.0 * std::sqrt(0.1 * 0.9 / 100'000));
}

TEST(CriticalValue, RejectsBadAlpha) {
  EXPECT_THROW(mtc::critical_value(10, 0.0, 0.0, mtc::Sides::two), mtc::DomainError);
  EXPECT_THROW(mtc::critical_value(10, 0.0, 1.0, mtc::Sides::two), mtc::DomainError);
}

TEST(SelectSignificant, Examples) {
  EXPECT_EQ(mtc::select_significant(stats({0.1, 5.0, 0.2}), 3.0, mtc::Sides::two),
            (std::vector<std::size_t>{1}));
  EXPECT_TRUE(mtc::select_significant(stats({0.1, -2.0}), 3.0, mtc::Sides::two).empty());
  EXPECT_EQ(mtc::select_significant(stats({-4.0, 3.5, 0.0}), 3.0, mtc::Sides::two),
            (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(mtc::select_significant(stats({-4.0, 3.5, 0.0}), 3.0, mtc::Sides::one),
            (std::vector<std::size_t>{1}));
}

TEST(RunTest, SpikeIsDetected) {
  std::vector<double> x(1000, 0.0);
  x[0] = 10.0;
  auto out = mtc::run_gnp_mom_test(stats(x), 0.05, mtc::Sides::two);
  EXPECT_TRUE(out.reject_global);
  EXPECT_EQ(out.argmax_index.value(), 0u);
  ASSERT_FALSE(out.significant_indices.empty());
  EXPECT_EQ(out.significant_indices.front(), 0u);
}

TEST(RunTest, DecisionConsistentWithCriticalValueOnRandomData) {
  std::mt19937_64 gen(31);
  std::normal_distribution<double> z;
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<double> x(50 + trial);
    const double common = 0.7 * z(gen);
    for (double& v : x) v = common + 0.7 * z(gen);
    x[trial % x.size()] += 0.1 * trial;
    for (auto sides : {mtc::Sides::two, mtc::Sides::one}) {
      auto out = mtc::run_gnp_mom_test(stats(x), 0.1, sides);
      ASSERT_EQ(out.reject_global, out.p_value <= 0.1);
      const double c = out.critical_value.value();
      if (std::abs(out.m_stat - c) > 1e-7) ASSERT_EQ(out.reject_global, out.m_stat >= c);
      if (out.reject_global) {
        ASSERT_TRUE(std::find(out.significant_indices.begin(), out.significant_indices.end(),
                              *out.argmax_index) != out.significant_indices.end());
      }
      for (std::size_t i : out.significant_indices) {
        if (i == *out.argmax_index) continue;
        const double v = sides == mtc::Sides::two ? std::abs(x[i]) : x[i];
        ASSERT_GE(v, c);
      }
    }
  }
}

TEST(RunTest, RhoOverrideMatchesGlobalP) {
  std::vector<double> x{0.3, -1.2, 2.9, 0.4, 0.0, -0.8};
  auto r = mtc::gnp_mom_p_value(x, mtc::Sides::two, {}, 0.0);
  EXPECT_NEAR(r.p_value, 1.0 - std::pow(2.0 * phi_cdf(2.9) - 1.0, 6.0), 1e-12);
  EXPECT_EQ(r.rho_used, 0.0);
  auto est = mtc::gnp_mom_p_value(x, mtc::Sides::two);
  EXPECT_EQ(est.rho_used, est.estimate.rho_hat);
  EXPECT_EQ(est.p_value, mtc::global_p_two_sided(2.9, 6, est.rho_used));
}

TEST(RunTest, PlugInApproachesOracleAsNGrows) {
  // With rho estimated from the data, the p-value converges to the one using the
  // true rho because rho_hat is root-n consistent.
  std::mt19937_64 gen(404);
  std::normal_distribution<double> z;
  double prev_gap = INFINITY;
  for (std::size_t n : {200u, 20000u}) {
    double gap = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
      std::vector<double> x(n);
      const double common = std::sqrt(0.5) * z(gen);
      for (double& v : x) v = common + std::sqrt(0.5) * z(gen);
      auto est = mtc::gnp_mom_p_value(x, mtc::Sides::two);
      gap += std::abs(est.p_value - mtc::global_p_two_sided(est.m_stat, n, 0.5));
    }
    EXPECT_LT(gap, prev_gap);
    prev_gap = gap;
  }
}

TEST(RunTest, Deterministic) {
  std::vector<double> x(500);
  std::mt19937_64 gen(1);
  std::normal_distribution<double> z;
  for (double& v : x) v = z(gen);
  auto a = mtc::run_gnp_mom_test(stats(x), 0.05, mtc::Sides::two);
  auto b = mtc::run_gnp_mom_test(stats(x), 0.05, mtc::Sides::two);
  EXPECT_EQ(a.p_value, b.p_value);
  EXPECT_EQ(a.critical_value, b.critical_value);
  EXPECT_EQ(a.significant_indices, b.significant_indices);
}
