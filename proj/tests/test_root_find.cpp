#include <gtest/gtest.h>

#include <cmath>

#include "mtc/errors.hpp"
#include "mtc/root_find.hpp"

TEST(Brent, FindsCubeRoot) {
  auto r = mtc::brent_root([](double x) { return x * x * x - 2.0; }, 0.0, 2.0, 1e-14, 0.0);
  EXPECT_NEAR(r.root, std::cbrt(2.0), 1e-13);
  EXPECT_LT(r.iterations, 60);
}

TEST(Brent, DecreasingFunction) {
  auto r = mtc::brent_root([](double x) { return std::exp(-x) - 0.25; }, -3.0, 10.0, 1e-13, 0.0);
  EXPECT_NEAR(r.root, std::log(4.0), 1e-12);
}

TEST(Brent, EndpointRoot) {
  auto r = mtc::brent_root([](double x) { return x - 1.0; }, 1.0, 3.0, 1e-12, 0.0);
  EXPECT_EQ(r.root, 1.0);
  EXPECT_EQ(r.iterations, 0);
}

TEST(Brent, FunctionToleranceStopsEarly) {
  auto r = mtc::brent_root([](double x) { return x - 0.5; }, 0.0, 1.0, 1e-300, 0.1);
  EXPECT_LE(std::abs(r.value), 0.1);
}

TEST(Brent, FlatStepFunctionStillBrackets) {
  auto r = mtc::brent_root([](double x) { return x < 0.3 ? -1.0 : 1.0; }, 0.0, 1.0, 1e-10, 0.0);
  EXPECT_NEAR(r.root, 0.3, 1e-9);
}

TEST(Brent, InvalidBracketThrows) {
  EXPECT_THROW(mtc::brent_root([](double x) { return x * x + 1.0; }, -1.0, 1.0, 1e-12, 0.0),
               mtc::DomainError);
}

TEST(Brent, IterationLimitThrows) {
  EXPECT_THROW(mtc::brent_root([](double x) { return x - 0.123456; }, 0.0, 1.0, 1e-300, 0.0, 2),
               mtc::ConvergenceError);
}
