#include <gtest/gtest.h>

#include <cmath>

#include "lg/costmodel.hpp"

using namespace lg;
using cost::Variant;

TEST(EvalCost, HandComputedDense) {
  // 2·256 + 8² + 4²·(4·4 + 16·(4 + 4·(2 + 2))) = 5952
  EXPECT_DOUBLE_EQ(cost::eval_cost(Variant::Dense, 16, 0, 0, 2, 4, 2), std::sqrt(5952.0));
}

TEST(EvalCost, HandComputedSparseNew) {
  // n = 16, m = 32, d2 = 4, b = 4: 16·(16·(1/8)·ln 16 + 16·(4 + 16·16/256))
  const double expected = std::sqrt(16.0 * (2.0 * std::log(16.0) + 16.0 * 5.0));
  EXPECT_NEAR(cost::eval_cost(Variant::SparseNew, 16, 32, 4, 1, 4, 4), expected, 1e-12);
}

TEST(EvalCost, RejectsNonpositive) {
  EXPECT_THROW(cost::eval_cost(Variant::Dense, 1, 1, 1, 1, 1, 1), Error);
  EXPECT_THROW(cost::eval_cost(Variant::Dense, 16, 1, 1, 0, 1, 1), Error);
  EXPECT_THROW(cost::eval_cost(Variant::Sparse, 16, -1, 1, 1, 1, 1), Error);
  EXPECT_THROW(cost::eval_cost(Variant::SparseNew, 16, 1, 1, 1, 1, 0), Error);
}

TEST(EvalCost, LargeDenseIsFinite) {
  const double n = 1e6;
  const double c = cost::eval_cost(Variant::Dense, n, n * n, 0, 1000, std::pow(n, 0.75), 1000);
  EXPECT_TRUE(std::isfinite(c));
  const double ratio = c / std::pow(n, 1.25);
  EXPECT_GT(ratio, 0.1);
  EXPECT_LT(ratio, 10.0);
}

TEST(EvalCost, SparseAtFullDensityIsDenseTimesSqrtLog) {
  for (double n : {64.0, 1024.0, 1e5})
    for (double x : {1.0, 8.0, 30.0})
      for (double a : {2.0, 16.0, 60.0})
        for (double b : {1.0, 2.0, 16.0}) {
          if (b > a || x > n || a > n) continue;
          const double d = cost::eval_cost(Variant::Dense, n, n * n, 0, x, a, b);
          const double s = cost::eval_cost(Variant::Sparse, n, n * n, 0, x, a, b);
          EXPECT_NEAR(s / std::sqrt(std::log(n)), d, 1e-9 * d);
        }
}

TEST(EvalCost, MonotoneInMAndD2) {
  for (auto v : {Variant::Sparse, Variant::SparseNew})
    for (double n : {100.0, 5000.0})
      for (double m = n; m < n * n / 2; m *= 3)
        for (double d2 = 1; d2 < n; d2 *= 4) {
          const double base = cost::eval_cost(v, n, m, d2, 5, 20, 10);
          EXPECT_LE(base, cost::eval_cost(v, n, m * 1.5, d2, 5, 20, 10));
          EXPECT_LE(base, cost::eval_cost(v, n, m, d2 * 1.5, 5, 20, 10));
        }
}

TEST(EvalCost, SparseNewClosedFormChoiceMatchesHeadline) {
  for (double n : {1e3, 1e4, 1e5, 1e6}) {
    const double m = std::pow(n, 1.5);
    const double d = 2 * m / n;
    const double b = std::pow(n, 4.0 / 3.0) / std::cbrt(m * std::log(n));
    const double c = cost::eval_cost(Variant::SparseNew, n, m, d, 1, b, b);
    const double headline = std::pow(n, 5.0 / 6.0) * std::pow(m * std::log(n), 1.0 / 6.0) + d * std::sqrt(n);
    EXPECT_LE(c, 4 * headline);
    EXPECT_GE(c, headline / 4);
  }
}

TEST(EvalCost, Warnings) {
  EXPECT_FALSE(cost::cost_warnings(Variant::Sparse, 1024, 100, 1).empty());
  EXPECT_TRUE(cost::cost_warnings(Variant::Sparse, 1024, std::pow(1024, 1.5), 1).empty());
  EXPECT_FALSE(cost::cost_warnings(Variant::SparseNew, 1024, 0, 10).empty());
  EXPECT_FALSE(cost::cost_warnings(Variant::SparseNew, 1024, 1024, 10).empty());
  EXPECT_TRUE(cost::cost_warnings(Variant::SparseNew, 1024, 1024 * 64, 100).empty());
}

TEST(Optimize, DenseNearClosedFormChoice) {
  const double n = std::exp2(20);
  auto o = cost::optimize_params(Variant::Dense, n, n * n, 0);
  EXPECT_LE(o.cost, o.closed_form_cost);
  EXPECT_LT(o.params.a / std::pow(n, 0.75), 4.0);
  EXPECT_GT(o.params.a / std::pow(n, 0.75), 0.25);
}

TEST(Optimize, SparseNearClosedFormChoice) {
  const double n = std::exp2(20), m = std::pow(n, 1.5);
  auto o = cost::optimize_params(Variant::Sparse, n, m, 2 * m / n);
  const double target = std::sqrt(n) / std::cbrt(m / (n * n));
  EXPECT_LE(o.cost, o.closed_form_cost);
  for (double t : {o.params.x, o.params.b}) {
    EXPECT_LT(t / target, 4.0);
    EXPECT_GT(t / target, 0.25);
  }
}

TEST(Optimize, SmallNIsIntegralFeasible) {
  for (auto v : {Variant::Dense, Variant::Sparse, Variant::SparseNew}) {
    auto o = cost::optimize_params(v, 8, 20, 5);
    const auto& p = o.integral;
    for (double t : {p.x, p.a, p.b}) {
      EXPECT_EQ(t, std::round(t));
      EXPECT_GE(t, 1.0);
      EXPECT_LE(t, 8.0);
    }
    EXPECT_LE(p.b, p.a);
    EXPECT_NEAR(o.integral_cost, cost::eval_cost(v, 8, 20, 5, p), 1e-12);
  }
}

TEST(Optimize, NeverWorseThanClosedFormChoice) {
  for (auto v : {Variant::Dense, Variant::Sparse, Variant::SparseNew})
    for (int e = 6; e <= 24; e += 3) {
      const double n = std::exp2(e);
      for (double c : {1.3, 1.5, 1.8}) {
        const double m = std::pow(n, c);
        auto o = cost::optimize_params(v, n, m, 2 * m / n);
        EXPECT_LE(o.cost, o.closed_form_cost * (1 + 1e-12));
      }
    }
}

TEST(Fit, MLaw) {
  EXPECT_DOUBLE_EQ(cost::parse_m_law("n^1.5"), 1.5);
  EXPECT_DOUBLE_EQ(cost::parse_m_law("n"), 1.0);
  EXPECT_THROW(cost::parse_m_law("m^2"), Error);
  EXPECT_THROW(cost::parse_m_law("n^x"), Error);
  EXPECT_THROW(cost::parse_m_law("n^3"), Error);
}

TEST(Fit, NeedsThreePoints) { EXPECT_THROW(cost::fit_exponent(Variant::Dense, 2, 10, 24, 2), Error); }

TEST(Fit, LogSlopeOfExactPower) {
  std::vector<double> xs, ys;
  for (int i = 1; i <= 8; ++i) {
    xs.push_back(std::exp2(i));
    ys.push_back(3.0 * std::pow(xs.back(), 0.7));
  }
  auto [s, r] = cost::log_slope(xs, ys);
  EXPECT_NEAR(s, 0.7, 1e-12);
  EXPECT_LT(r, 1e-12);
}

TEST(Fit, DenseFiveQuarters) {
  auto r = cost::fit_exponent(Variant::Dense, 2.0);
  EXPECT_EQ(r.points.size(), 15u);
  EXPECT_NEAR(r.exponent, 1.25, 0.02);
  EXPECT_LT(r.residual, 0.05);
}

TEST(Fit, SparseSevenSixths) {
  auto r = cost::fit_exponent(Variant::Sparse, 1.5);
  EXPECT_TRUE(r.log_corrected);
  EXPECT_NEAR(r.exponent, 7.0 / 6.0, 0.03);
}

TEST(Fit, SparseNewThirteenTwelfths) {
  auto r = cost::fit_exponent(Variant::SparseNew, 1.5);
  ASSERT_TRUE(r.power_exponent && r.d2_exponent);
  EXPECT_NEAR(r.exponent, 13.0 / 12.0, 0.03);
  EXPECT_NEAR(*r.d2_exponent, 1.0, 1e-9);
  EXPECT_EQ(r.dominant, "power");
}
