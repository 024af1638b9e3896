#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "risgeom/analytic.hpp"
#include "risgeom/params.hpp"
#include "risgeom/quadrature.hpp"

using namespace risgeom;

namespace {
constexpr double kBeta300 = 2.0 * 300e-6 * 15.0 / std::numbers::pi;
}

TEST(Integrate1d, Linear) {
  const auto r = integrate_1d([](double x) { return x; }, 0.0, 1.0);
  EXPECT_NEAR(r.value, 0.5, 1e-12);
  EXPECT_GT(r.evaluations, 0u);
}

TEST(Integrate1d, ZeroIntegrand) {
  EXPECT_EQ(integrate_1d([](double) { return 0.0; }, 0.0, 1.0).value, 0.0);
}

TEST(Integrate1d, EmptyInterval) {
  EXPECT_EQ(integrate_1d([](double x) { return x; }, 2.0, 2.0).value, 0.0);
}

TEST(Integrate1d, RejectsBadArguments) {
  auto f = [](double x) { return x; };
  EXPECT_THROW(integrate_1d(f, 1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(integrate_1d(f, 0.0, INFINITY), std::invalid_argument);
  EXPECT_THROW(integrate_1d(f, 0.0, 1.0, 0.0, 1e-10), std::invalid_argument);
}

TEST(Integrate1d, ExponentialMomentMatchesClosedForm) {
  // ∫₀^∞ e^{-βr} r dr = 1/β².
  const double rmax = truncation_radius(kBeta300, 1e-8);
  const auto r = integrate_1d([](double x) { return std::exp(-kBeta300 * x) * x; }, 0.0, rmax, 1e-8, 1e-12);
  const double exact = 1.0 / (kBeta300 * kBeta300);
  EXPECT_NEAR(exact, 1.21847e5, 1.0);
  EXPECT_NEAR(r.value / exact, 1.0, 1e-6);
}

TEST(Integrate1d, ExhaustedBudgetThrowsWithPartial) {
  QuadratureOptions opt;
  opt.rel_tol = 1e-15;
  opt.abs_tol = 1e-300;
  opt.max_evaluations = 200;
  try {
    integrate_1d([](double x) { return std::sin(1.0 / (x + 1e-3)); }, 0.0, 1.0, opt);
    FAIL() << "expected QuadratureError";
  } catch (const QuadratureError& e) {
    EXPECT_GT(e.partial().evaluations, 0u);
  }
}

TEST(Integrate1dBreaks, HandlesKink) {
  const std::array<double, 3> pts{-1.0, 0.0, 1.0};
  const auto r = integrate_1d_breaks([](double x) { return std::abs(x); }, pts);
  EXPECT_NEAR(r.value, 1.0, 1e-12);
  const std::array<double, 2> unsorted{1.0, 0.0};
  EXPECT_THROW(integrate_1d_breaks([](double x) { return x; }, unsorted), std::invalid_argument);
}

TEST(IntegratePolar, ZeroIntegrand) {
  EXPECT_EQ(integrate_polar([](double, double) { return 0.0; }, 1.0).value, 0.0);
}

TEST(IntegratePolar, UnitDiskArea) {
  EXPECT_NEAR(integrate_polar([](double, double) { return 1.0; }, 1.0).value, std::numbers::pi, 1e-9);
}

TEST(IntegratePolar, CallableLimit) {
  // Region t < 1 + cos φ is a cardioid of area 3π/2.
  const auto r = integrate_polar([](double, double) { return 1.0; }, [](double phi) { return 1.0 + std::cos(phi); });
  EXPECT_NEAR(r.value, 1.5 * std::numbers::pi, 1e-6);
}

TEST(IntegratePolar, EvenHalfRangeMatchesFullRange) {
  auto f = [](double t, double phi) { return reflection_probability(100.0, t, phi, kBeta300).probability; };
  const double tmax = truncation_radius(kBeta300, 1e-8);
  PolarOptions half;
  half.even_in_phi = true;
  half.radial_breaks = {100.0};
  PolarOptions full;
  full.radial_breaks = {100.0};
  const double a = integrate_polar(f, tmax, half).value;
  const double b = integrate_polar(f, tmax, full).value;
  EXPECT_NEAR(a / b, 1.0, 1e-6);
}

TEST(TruncationRadius, SolvesTailEquation) {
  const double r = truncation_radius(kBeta300, 1e-8);
  const double x = kBeta300 * r;
  EXPECT_NEAR((x + 1.0) * std::exp(-x), 1e-8, 1e-12);
  // Order of magnitude of the tail root; the exact bisection value is 7517 m.
  EXPECT_NEAR(r, 7517.4, 0.5);
}

TEST(TruncationRadius, ShrinksAsToleranceGrows) {
  EXPECT_LT(truncation_radius(kBeta300, 0.999999), 1.0);
  EXPECT_LT(truncation_radius(kBeta300, 0.5), truncation_radius(kBeta300, 1e-3));
}

TEST(TruncationRadius, LargerBetaSmallerRadius) {
  const double r1 = truncation_radius(kBeta300, 1e-8);
  const double r2 = truncation_radius(2.0 * kBeta300, 1e-8);
  EXPECT_LT(r2, r1);
  EXPECT_NEAR(r2, r1 / 2.0, 1e-9 * r1);
}

TEST(TruncationRadius, RejectsBadArguments) {
  EXPECT_THROW(truncation_radius(0.0, 1e-8), std::invalid_argument);
  EXPECT_THROW(truncation_radius(kBeta300, 1.0), std::invalid_argument);
  EXPECT_THROW(truncation_radius(kBeta300, 0.0), std::invalid_argument);
}
