#include "hybridloc/errors.hpp"
#include "hybridloc/linalg.hpp"
#include "hybridloc/motion.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

namespace hybridloc {
namespace {

TEST(TransitionMatrix, UnitPeriod) {
  Covariance4 expected;
  expected << 1, 1, 0, 0,
              0, 1, 0, 0,
              0, 0, 1, 1,
              0, 0, 0, 1;
  EXPECT_EQ(transition_matrix({1.0, 0.35}), expected);
}

TEST(TransitionMatrix, BleEpoch) {
  const Covariance4 f = transition_matrix({1.0 / 3.0, 0.35});
  EXPECT_DOUBLE_EQ(f(kX, kVx), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(f(kY, kVy), 1.0 / 3.0);
  EXPECT_EQ(f(kX, kX), 1.0);
  EXPECT_EQ(f(kVx, kX), 0.0);
}

TEST(TransitionMatrix, UniformLinearMotion) {
  const StateVector moved = transition_matrix({0.5, 0.0}) * make_state(0, 1, 0, 2);
  EXPECT_EQ(moved, make_state(0.5, 1, 1, 2));
}

TEST(ProcessNoise, UnitPeriodUnitVariance) {
  const Covariance4 q = process_noise({1.0, 1.0});
  Eigen::Matrix2d block;
  block << 0.25, 0.5, 0.5, 1.0;
  EXPECT_EQ((q.block<2, 2>(0, 0)), block);
  EXPECT_EQ((q.block<2, 2>(2, 2)), block);
  EXPECT_TRUE((q.block<2, 2>(0, 2).isZero(0.0)));
}

TEST(ProcessNoise, ZeroVarianceIsZero) {
  EXPECT_TRUE(process_noise({0.7, 0.0}).isZero(0.0));
}

TEST(ProcessNoise, TwoSecondsHalfVariance) {
  Eigen::Matrix2d block;
  block << 2, 2, 2, 2;
  EXPECT_EQ((process_noise({2.0, 0.5}).block<2, 2>(0, 0)), block);
}

TEST(ProcessNoise, PsdForAnyPeriod) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> dt(1e-3, 10.0), var(0.0, 5.0);
  for (int i = 0; i < 200; ++i) {
    const Covariance4 q = process_noise({dt(rng), var(rng)});
    const Eigen::Matrix2d b = q.block<2, 2>(0, 0);
    EXPECT_LE(std::abs(b.determinant()), 1e-12 * b(0, 0) * b(1, 1));
    EXPECT_GE(b.trace(), 0.0);
    EXPECT_TRUE(is_psd(q));
  }
}

TEST(Predict, StationaryNoiseless) {
  Gaussian g{make_state(1, 0, 2, 0), Covariance4::Zero()};
  const Gaussian out = predict(g, {0.8, 0.0});
  EXPECT_EQ(out.mean, g.mean);
  EXPECT_TRUE(out.cov.isZero(0.0));
}

TEST(Predict, UnitVelocityMovesOneMeter) {
  const Gaussian out = predict({make_state(0, 1, 0, 0), Covariance4::Identity()}, {1.0, 0.35});
  EXPECT_DOUBLE_EQ(out.mean(kX), 1.0);
}

TEST(Predict, IdentityCovarianceOneSecond) {
  // F_t I F_t^T = [[2, 1], [1, 1]]; plus Q_t = [[0.25, 0.5], [0.5, 1]].
  Eigen::Matrix2d expected;
  expected << 2.25, 1.5, 1.5, 2.0;
  const Gaussian out = predict({StateVector::Zero(), Covariance4::Identity()}, {1.0, 1.0});
  EXPECT_TRUE((out.cov.block<2, 2>(0, 0).isApprox(expected, 1e-15)));
  EXPECT_TRUE((out.cov.block<2, 2>(2, 2).isApprox(expected, 1e-15)));
}

TEST(Predict, ZeroPeriodIsIdentity) {
  std::mt19937_64 rng(9);
  const Gaussian g{testing::random_state(rng), testing::random_spd(rng)};
  const Gaussian out = predict(g, {0.0, 0.35});
  EXPECT_EQ(out.mean, g.mean);
  EXPECT_TRUE(out.cov.isApprox(g.cov, 1e-15));
}

TEST(Predict, PreservesCovarianceInvariants) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    const Gaussian g{testing::random_state(rng), testing::random_spd(rng)};
    const Gaussian out = predict(g, {0.33, 0.35});
    EXPECT_TRUE(is_symmetric(out.cov, 1e-12));
    EXPECT_TRUE(is_psd(out.cov));
  }
}

TEST(Predict, TwoHalfStepsMatchOneStepInMean) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 50; ++i) {
    const Gaussian g{testing::random_state(rng), testing::random_spd(rng)};
    const Gaussian twice = predict(predict(g, {0.4, 0.35}), {0.4, 0.35});
    const Gaussian once = predict(g, {0.8, 0.35});
    EXPECT_TRUE(twice.mean.isApprox(once.mean, 1e-12));
  }
}

TEST(Predict, RejectsNegativeInputs) {
  EXPECT_THROW(predict({}, {-0.1, 0.35}), InvalidArgument);
  EXPECT_THROW(predict({}, {0.1, -1.0}), InvalidArgument);
}

}  // namespace
}  // namespace hybridloc
