#include "telegame/monte_carlo.hpp"

#include "telegame/error.hpp"
#include "telegame/protocols.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

namespace telegame {
namespace {

McConfig config(double alpha, std::size_t shots, std::uint64_t seed) {
  McConfig c;
  c.alpha = alpha;
  c.shots = shots;
  c.seed = seed;
  return c;
}

TEST(ShotRng, StreamsDependOnSeedAndShot) {
  Rng a = shot_rng(1, 5);
  Rng b = shot_rng(1, 5);
  EXPECT_EQ(a(), b());
  EXPECT_NE(shot_rng(1, 5)(), shot_rng(1, 6)());
  EXPECT_NE(shot_rng(1, 5)(), shot_rng(2, 5)());
  EXPECT_NE(shot_rng(0, 1ULL << 32)(), shot_rng(0, 0)());
}

TEST(SampleGaussian, MomentsMatch) {
  Rng rng = shot_rng(3, 0);
  Matrix cov(2, 2);
  cov << 2.0, 0.6, 0.6, 0.5;
  Vector mean(2);
  mean << 1.0, -2.0;
  const int n = 200000;
  Vector sum = Vector::Zero(2);
  Matrix outer = Matrix::Zero(2, 2);
  for (int i = 0; i < n; ++i) {
    const Vector s = sample_gaussian(mean, cov, rng);
    sum += s;
    outer += (s - mean) * (s - mean).transpose();
  }
  EXPECT_LT((sum / n - mean).cwiseAbs().maxCoeff(), 0.01);
  EXPECT_LT((outer / n - cov).cwiseAbs().maxCoeff(), 0.02);
}

TEST(SampleBellOutcome, VacuumInputStatistics) {
  const GamePipeline game(2.0);
  const GaussianState post = game.bell_input_state({0.0, 0.0});
  Rng rng = shot_rng(11, 0);
  const int n = 100000;
  double sx = 0.0, sp = 0.0, sxx = 0.0;
  for (int i = 0; i < n; ++i) {
    const ComplexAmplitude eta = sample_bell_outcome(post, rng);
    sx += eta.re;
    sp += eta.im;
    sxx += eta.re * eta.re;
  }
  EXPECT_NEAR(sx / n, 0.0, 0.02);
  EXPECT_NEAR(sp / n, 0.0, 0.02);
  // Var(X_-) = (alpha + 1/2)/2 = 1.25
  EXPECT_NEAR(sxx / n, 1.25, 0.05 * 1.25);
}

TEST(SampleHeterodyneOutcome, VacuumAndCoherent) {
  const GaussianState vac = GaussianState::vacuum(2);
  Rng rng = shot_rng(12, 0);
  const int n = 100000;
  double sxx = 0.0, spp = 0.0, sxp = 0.0;
  for (int i = 0; i < n; ++i) {
    const ComplexAmplitude mu = sample_heterodyne_outcome(vac, 1, rng);
    const double x = std::sqrt(2.0) * mu.re;
    const double p = std::sqrt(2.0) * mu.im;
    sxx += x * x;
    spp += p * p;
    sxp += x * p;
  }
  // Vacuum variance plus one unit of heterodyne noise.
  EXPECT_NEAR(sxx / n, 1.0, 0.02);
  EXPECT_NEAR(spp / n, 1.0, 0.02);
  EXPECT_NEAR(sxp / n, 0.0, 0.02);

  const GaussianState coh = tensor(GaussianState::vacuum(1), make_coherent({1.0, 0.0}));
  double re = 0.0, im = 0.0;
  for (int i = 0; i < n; ++i) {
    const ComplexAmplitude mu = sample_heterodyne_outcome(coh, 1, rng);
    re += mu.re;
    im += mu.im;
  }
  EXPECT_NEAR(re / n, 1.0, 0.01);
  EXPECT_NEAR(im / n, 0.0, 0.01);
}

TEST(EstimateFidelities, Deterministic) {
  const McConfig c = config(2.0, 5000, 42);
  EXPECT_EQ(estimate_fidelities(c), estimate_fidelities(c));
  const McEstimate other = estimate_fidelities(config(2.0, 5000, 43));
  EXPECT_NE(other.f_tr_hat, estimate_fidelities(c).f_tr_hat);
}

TEST(EstimateFidelities, ThreadCountInvariant) {
  // Not a multiple of the chunk size, so the tail chunk is exercised too.
  const McConfig c = config(5.0, 3 * kShotsPerChunk + 17, 9);
  const McEstimate one = estimate_fidelities(c, 1);
  EXPECT_EQ(one, estimate_fidelities(c, 3));
  EXPECT_EQ(one, estimate_fidelities(c, 8));
  EXPECT_EQ(one.shots, c.shots);
}

class WithinThreeSigma : public ::testing::TestWithParam<double> {};

TEST_P(WithinThreeSigma, MatchesClosedForms) {
  const double a = GetParam();
  const McEstimate e = estimate_fidelities(config(a, 40000, 2024), 0);
  EXPECT_LE(std::abs(e.f_tr_hat - f_noncoop(a)), 3.0 * e.stderr_tr);
  EXPECT_LE(std::abs(e.f_ab_hat - f_ab_coop(a)), 3.0 * e.stderr_ab);
  EXPECT_LE(std::abs(e.f_ac_hat - f_ac_coop(a)), 3.0 * e.stderr_ac);
  EXPECT_GT(e.stderr_tr, 0.0);
}

INSTANTIATE_TEST_SUITE_P(Alphas, WithinThreeSigma, ::testing::Values(0.5, 2.0, 5.76, 10.0));

TEST(EstimateFidelities, StrategiesAgreeAtThreshold) {
  const McEstimate e = estimate_fidelities(config(5.76, 60000, 5), 0);
  const double coop = 0.5 * (e.f_ab_hat + e.f_ac_hat);
  const double se = std::hypot(e.stderr_tr, 0.5 * std::hypot(e.stderr_ab, e.stderr_ac));
  EXPECT_LE(std::abs(coop - e.f_tr_hat), 4.0 * se);
}

TEST(EstimateFidelities, VacuumEnsembleStillMatches) {
  McConfig c = config(2.0, 30000, 8);
  c.input_ensemble_std = 0.0;
  const McEstimate e = estimate_fidelities(c, 0);
  EXPECT_LE(std::abs(e.f_tr_hat - 2.0 / 3.0), 3.0 * e.stderr_tr);
}

TEST(EstimateFidelities, StderrShrinksWithShots) {
  const McEstimate small = estimate_fidelities(config(2.0, 8000, 1), 0);
  const McEstimate large = estimate_fidelities(config(2.0, 16000, 1), 0);
  const double ratio = small.stderr_tr / large.stderr_tr;
  EXPECT_GT(ratio, 1.2);
  EXPECT_LT(ratio, 1.7);
}

TEST(EstimateFidelities, PerShotSamplesVary) {
  // Trajectory fidelities depend on the outcomes, so the samples spread.
  const McEstimate e = estimate_fidelities(config(2.0, 2000, 3));
  EXPECT_GT(e.spread_tr, 0.1);
  EXPECT_GT(e.spread_ab, 0.1);
}

TEST(EstimateFidelities, RejectsBadConfig) {
  EXPECT_THROW(estimate_fidelities(config(2.0, 0, 1)), InvalidInput);
  McConfig neg = config(2.0, 10, 1);
  neg.input_ensemble_std = -1.0;
  EXPECT_THROW(estimate_fidelities(neg), InvalidInput);
  neg.input_ensemble_std = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(estimate_fidelities(neg), InvalidInput);
  EXPECT_THROW(estimate_fidelities(config(0.2, 10, 1)), DomainError);
}

}  // namespace
}  // namespace telegame
