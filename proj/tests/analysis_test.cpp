#include "telegame/analysis.hpp"

#include "telegame/error.hpp"
#include "telegame/protocols.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace telegame {
namespace {

TEST(Sweep, GridAndValues) {
  const auto rows = sweep(0.5, 12.0, 200);
  ASSERT_EQ(rows.size(), 200u);
  EXPECT_EQ(rows.front().alpha, 0.5);
  EXPECT_EQ(rows.back().alpha, 12.0);
  for (const SweepRow& r : rows) {
    EXPECT_EQ(r.f_tr, f_noncoop(r.alpha));
    EXPECT_GE(r.f_ab, r.f_tr);
    EXPECT_GE(r.f_tr, r.f_ac);
    EXPECT_DOUBLE_EQ(r.f_coop, 0.5 * (r.f_ab + r.f_ac));
  }
  const auto two = sweep(2.0, 3.0, 2);
  EXPECT_NEAR(two.front().f_tr, 2.0 / 3.0, 1e-15);
}

TEST(Sweep, RejectsBadRanges) {
  EXPECT_THROW(sweep(0.5, 12.0, 1), InvalidInput);
  EXPECT_THROW(sweep(5.0, 2.0, 10), InvalidInput);
  EXPECT_THROW(sweep(0.4, 2.0, 10), InvalidInput);
  EXPECT_THROW(sweep(0.5, std::nan(""), 10), InvalidInput);
}

TEST(CooperationGain, SignAroundThreshold) {
  for (double a = 0.5; a < 5.7; a += 0.05) EXPECT_LT(cooperation_gain(a), 0.0) << a;
  for (double a = 5.82; a < 50.0; a += 0.25) EXPECT_GT(cooperation_gain(a), 0.0) << a;
}

TEST(FirstSignChange, FindsBracket) {
  const auto b = first_sign_change([](double x) { return x - 1.234; }, 0.0, 5.0, 0.01);
  ASSERT_TRUE(b.has_value());
  EXPECT_LE(b->first, 1.234);
  EXPECT_GE(b->second, 1.234);
  EXPECT_NEAR(b->second - b->first, 0.01, 1e-12);
  EXPECT_FALSE(first_sign_change([](double x) { return x * x + 1.0; }, -1.0, 1.0, 0.01));
}

TEST(Bisect, ConvergesAndReportsResidual) {
  const BisectionResult r = bisect([](double x) { return x * x - 2.0; }, 1.0, 2.0, 1e-12);
  EXPECT_NEAR(r.root, std::sqrt(2.0), 1e-12);
  EXPECT_LE(r.residual, 1e-12);
  EXPECT_GT(r.iterations, 10);
}

TEST(Bisect, Errors) {
  EXPECT_THROW(bisect([](double x) { return x * x + 1.0; }, -1.0, 1.0, 1e-9), BracketError);
  // A jump with no root: the bracket collapses without meeting tol.
  EXPECT_THROW(bisect([](double x) { return x < 0.3 ? -1.0 : 1.0; }, 0.0, 1.0, 1e-9),
               BracketError);
}

TEST(Threshold, WithinBracket) {
  const ThresholdResult r = find_threshold(1e-9);
  EXPECT_GE(r.alpha_th, 5.70);
  EXPECT_LE(r.alpha_th, 5.82);
  EXPECT_LE(r.residual, 1e-9);
  EXPECT_LE(std::abs(f_coop_avg(r.alpha_th) - f_noncoop(r.alpha_th)), 1e-9);
  EXPECT_NEAR(r.f_at_threshold, f_noncoop(r.alpha_th), 1e-15);
  EXPECT_NEAR(r.f_at_threshold, 0.5858, 1e-4);
}

TEST(Threshold, LooserToleranceNeedsFewerSteps) {
  EXPECT_LT(find_threshold(1e-3).iterations, find_threshold(1e-12).iterations);
  EXPECT_THROW(find_threshold(0.0), InvalidInput);
  EXPECT_THROW(find_threshold(-1.0), InvalidInput);
}

TEST(ClassicalCrossings, MatchQuadraticOracle) {
  // f_tr = 1/2 <=> kappa = 2 <=> alpha^2 - 10 alpha + 5 = 0.
  const ClassicalCrossings c = find_classical_crossings();
  EXPECT_NEAR(c.alpha_tr_half, 5.0 + 2.0 * std::sqrt(5.0), 1e-6);
  EXPECT_GT(c.alpha_coop_half, c.alpha_tr_half);
  EXPECT_NEAR(f_coop_avg(c.alpha_coop_half), 0.5, 1e-12);
}

TEST(Sweep, SingleCrossingOnDefaultGrid) {
  const auto rows = sweep(0.5, 12.0, 200);
  const ThresholdResult th = find_threshold();
  int changes = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const bool before = rows[i - 1].f_coop > rows[i - 1].f_tr;
    const bool after = rows[i].f_coop > rows[i].f_tr;
    if (before != after) {
      ++changes;
      EXPECT_LE(rows[i - 1].alpha, th.alpha_th);
      EXPECT_GE(rows[i].alpha, th.alpha_th);
    }
  }
  EXPECT_EQ(changes, 1);
}

TEST(CooperationGain, SingleSignChangeAtFineResolution) {
  int changes = 0;
  double prev = cooperation_gain(0.5);
  for (int k = 1; k <= 4950; ++k) {
    const double g = cooperation_gain(0.5 + 0.01 * k);
    if ((g > 0) != (prev > 0)) ++changes;
    prev = g;
  }
  EXPECT_EQ(changes, 1);
}

}  // namespace
}  // namespace telegame
