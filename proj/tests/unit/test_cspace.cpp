#include <gtest/gtest.h>

#include "earc/cspace.hpp"
#include "oracle.hpp"

using namespace earc;

namespace {

const RobotModel kDisc = RobotModel::disc(0.5);
const RobotModel kArm = RobotModel::planar_arm(Pose2(0, 0, 0), {0.3, 0.3, 0.3}, 0.05);

}  // namespace

TEST(CSpace, DiscDistanceWeightsHeadingByRadius) {
  const Configuration a{0, 0, 0}, b{3, 4, kPi / 2};
  EXPECT_NEAR(distance(a, b, kDisc), std::sqrt(25.0 + 0.25 * kPi * kPi / 4), 1e-12);
  EXPECT_NEAR(distance(a, b, kDisc), oracle::config_gap(a, b, kDisc), 1e-12);
}

TEST(CSpace, ArmDistanceWrapsJoints) {
  const Configuration a{kPi - 0.1, 0, 0}, b{-kPi + 0.1, 0, 0};
  EXPECT_NEAR(distance(a, b, kArm), kArm.reach() * 0.2, 1e-12);
}

TEST(CSpace, DistanceRejectsDofMismatch) {
  EXPECT_THROW(distance(Configuration{0, 0}, Configuration{0, 0, 0}, kArm), std::invalid_argument);
}

TEST(CSpace, InterpolationEndpointsExactAndShortArc) {
  const Configuration a{0, 0, kPi - 0.1}, b{2, 2, -kPi + 0.1};
  EXPECT_EQ(interpolate(a, b, 0.0, kDisc), a);
  EXPECT_EQ(interpolate(a, b, 1.0, kDisc), b);
  const auto mid = interpolate(a, b, 0.5, kDisc);
  EXPECT_NEAR(mid[0], 1.0, 1e-12);
  EXPECT_NEAR(std::abs(mid[2]), kPi, 1e-9);
  EXPECT_THROW(interpolate(a, b, 1.5, kDisc), std::invalid_argument);
}

TEST(CSpace, SamplesStayInBox) {
  Rng rng(3);
  const ConfigBox box = full_box(kDisc, Rect{{0, 0}, {4, 2}});
  for (int i = 0; i < 500; ++i) {
    const auto c = sample(kDisc, box, rng, 2);
    EXPECT_EQ(c.robot_index, 2);
    EXPECT_GE(c[0], 0.5);
    EXPECT_LE(c[0], 3.5);
    EXPECT_GE(c[1], 0.5);
    EXPECT_LE(c[1], 1.5);
    EXPECT_LE(std::abs(c[2]), kPi);
  }
  EXPECT_THROW(sample(RobotModel::planar_arm(Pose2{}, {0.3, 0.3, 0.3, 0.3, 0.3}, 0.05), box, rng), std::invalid_argument);
}

TEST(CSpace, EdgeValidityFindsObstacleInMiddle) {
  const Environment env{{{0, 0}, {10, 10}}, {Circle{{5, 5}, 0.5}}};
  const Configuration a{1, 5, 0}, b{9, 5, 0};
  EXPECT_TRUE(config_valid(a, kDisc, env));
  EXPECT_TRUE(config_valid(b, kDisc, env));
  EXPECT_FALSE(edge_valid(a, b, kDisc, env, {}, validation_step(kDisc)));
  const Configuration c{1, 8, 0}, d{9, 8, 0};
  EXPECT_TRUE(edge_valid(c, d, kDisc, env, {}, validation_step(kDisc)));
}

TEST(CSpace, CompositeEdgeDetectsSwap) {
  const Environment env{{{0, 0}, {10, 10}}, {}};
  const std::vector<RobotModel> models{kDisc, kDisc};
  const CompositeConfiguration a{Configuration({2, 5, 0}, 0), Configuration({8, 5, 0}, 1)};
  const CompositeConfiguration b{Configuration({8, 5, 0}, 0), Configuration({2, 5, 0}, 1)};
  EXPECT_TRUE(composite_config_valid(a, models, env));
  EXPECT_TRUE(composite_config_valid(b, models, env));
  EXPECT_FALSE(composite_edge_valid(a, b, models, env));
  const CompositeConfiguration c{Configuration({2, 2, 0}, 0), Configuration({8, 8, 0}, 1)};
  const CompositeConfiguration d{Configuration({8, 2, 0}, 0), Configuration({2, 8, 0}, 1)};
  EXPECT_TRUE(composite_edge_valid(c, d, models, env, CheckSettings{}));
}

TEST(CSpace, CompositeStepsBoundMotionPerInterval) {
  const std::vector<RobotModel> models{kDisc, kArm};
  const CompositeConfiguration a{Configuration({0, 0, 0}, 0), Configuration({0, 0, 0}, 1)};
  const CompositeConfiguration b{Configuration({1, 0, 0}, 0), Configuration({1, 1, 0}, 1)};
  const int n = composite_steps(a, b, models);
  EXPECT_LE(distance(a[0], b[0], kDisc) / n, validation_step(kDisc) + 1e-12);
  EXPECT_LE(distance(a[1], b[1], kArm) / n, validation_step(kArm) + 1e-12);
  EXPECT_GT(distance(a[1], b[1], kArm) / (n - 1), validation_step(kArm));
}

TEST(CSpace, ConservativeMarginsCertifyTheContinuousMotion) {
  // Random short disc pair motions accepted by the conservative check must
  // be collision-free under a much finer independent scan.
  Rng rng(21);
  const Environment env{{{0, 0}, {6, 6}}, {Circle{{3, 3}, 0.6}}};
  const std::vector<RobotModel> models{kDisc, kDisc};
  int accepted = 0;
  for (int k = 0; k < 400; ++k) {
    CompositeConfiguration a, b;
    for (int r = 0; r < 2; ++r) {
      a.push_back(Configuration({rng.uniform(0.5, 5.5), rng.uniform(0.5, 5.5), 0}, r));
      b.push_back(Configuration({a.back()[0] + rng.uniform(-2, 2), a.back()[1] + rng.uniform(-2, 2), 0}, r));
    }
    if (!composite_edge_valid(a, b, models, env, CheckSettings{})) continue;
    ++accepted;
    for (int i = 0; i <= 200; ++i) {
      const double s = i / 200.0;
      const auto ca = oracle::lerp(a[0], b[0], s, kDisc), cb = oracle::lerp(a[1], b[1], s, kDisc);
      const auto sa = oracle::shape(kDisc, ca), sb = oracle::shape(kDisc, cb);
      ASSERT_FALSE(oracle::overlap(sa, sb));
      ASSERT_FALSE(oracle::hits_env(sa, env));
      ASSERT_FALSE(oracle::hits_env(sb, env));
    }
  }
  EXPECT_GT(accepted, 20);
}

TEST(CSpace, MarginsVanishWhenExact) {
  EXPECT_EQ(env_margin(kDisc, CheckSettings::exact()), 0.0);
  EXPECT_EQ(pair_margin(kDisc, kArm, CheckSettings::exact()), 0.0);
  EXPECT_GT(pair_margin(kDisc, kArm, CheckSettings{}), 0.0);
  EXPECT_DOUBLE_EQ(effective_step(kDisc, CheckSettings{4, true, 0.1}), 0.1);
}
