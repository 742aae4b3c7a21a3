#include <gtest/gtest.h>

#include "earc/geometry.hpp"
#include "earc/random.hpp"
#include "oracle.hpp"

using namespace earc;

namespace {

double sampled_segment_distance(const Segment& s, const Segment& t, int n = 400) {
  double best = 1e18;
  for (int i = 0; i <= n; ++i) {
    const Vec2 p = s.a + (static_cast<double>(i) / n) * (s.b - s.a);
    best = std::min(best, point_segment_distance(p, t));
  }
  return best;
}

}  // namespace

TEST(Geometry, WrapAngleRange) {
  for (double a : {-10.0, -kPi, -1.0, 0.0, 1.0, kPi, 7.5, 100.0}) {
    const double w = wrap_angle(a);
    EXPECT_GT(w, -kPi - 1e-12);
    EXPECT_LE(w, kPi + 1e-12);
    EXPECT_NEAR(std::sin(w), std::sin(a), 1e-9);
    EXPECT_NEAR(std::cos(w), std::cos(a), 1e-9);
  }
}

TEST(Geometry, SegmentDistanceMatchesDenseSampling) {
  Rng rng(7);
  for (int k = 0; k < 300; ++k) {
    const Segment s{{rng.uniform(-2, 2), rng.uniform(-2, 2)}, {rng.uniform(-2, 2), rng.uniform(-2, 2)}};
    const Segment t{{rng.uniform(-2, 2), rng.uniform(-2, 2)}, {rng.uniform(-2, 2), rng.uniform(-2, 2)}};
    const double exact = segment_segment_distance(s, t);
    const double sampled = sampled_segment_distance(s, t);
    EXPECT_LE(exact, sampled + 1e-12);
    EXPECT_NEAR(exact, sampled, 0.02);
  }
}

TEST(Geometry, SegmentDistanceHandCases) {
  EXPECT_DOUBLE_EQ(segment_segment_distance({{0, 0}, {2, 0}}, {{1, -1}, {1, 1}}), 0.0);
  EXPECT_DOUBLE_EQ(segment_segment_distance({{0, 0}, {1, 0}}, {{0, 1}, {1, 1}}), 1.0);
  EXPECT_DOUBLE_EQ(segment_segment_distance({{0, 0}, {1, 0}}, {{2, 0}, {3, 0}}), 1.0);
  EXPECT_DOUBLE_EQ(segment_segment_distance({{0, 0}, {0, 0}}, {{3, 4}, {3, 4}}), 5.0);
}

TEST(Geometry, ArmForwardKinematics) {
  const RobotModel arm = RobotModel::planar_arm(Pose2(1.0, 2.0, kPi / 2), {1.0, 0.5}, 0.05);
  const double q[] = {-kPi / 2, kPi / 2};
  const auto segs = fk_planar_arm(arm, q);
  ASSERT_EQ(segs.size(), 2u);
  EXPECT_NEAR(segs[0].b.x, 2.0, 1e-12);
  EXPECT_NEAR(segs[0].b.y, 2.0, 1e-12);
  EXPECT_NEAR(segs[1].b.x, 2.0, 1e-12);
  EXPECT_NEAR(segs[1].b.y, 2.5, 1e-12);
}

TEST(Geometry, DiscContactIsStrict) {
  const RobotModel d = RobotModel::disc(0.5);
  const double a[] = {0.0, 0.0, 0.0};
  const double touching[] = {1.0, 0.0, 0.0};
  const double overlapping[] = {0.99, 0.0, 0.0};
  EXPECT_FALSE(robots_collide(d, a, d, touching));
  EXPECT_TRUE(robots_collide(d, a, d, overlapping));
  EXPECT_TRUE(robots_collide(d, a, d, touching, 0.01));
}

TEST(Geometry, EnvironmentCollisions) {
  Environment env{{{0, 0}, {10, 10}}, {Circle{{5, 5}, 1.0}, Rect{{1, 7}, {3, 9}}}};
  const RobotModel d = RobotModel::disc(0.5);
  auto at = [&](double x, double y) {
    const double c[] = {x, y, 0.0};
    return robot_env_collides(d, c, env);
  };
  EXPECT_FALSE(at(8, 2));
  EXPECT_TRUE(at(0.4, 5));
  EXPECT_FALSE(at(0.5, 5));
  EXPECT_TRUE(at(5, 6.4));
  EXPECT_FALSE(at(5, 6.5));
  EXPECT_TRUE(at(2, 8));
  EXPECT_TRUE(at(3.4, 8));
  EXPECT_FALSE(at(3.5, 8));
}

TEST(Geometry, ArmThroughRectangle) {
  Environment env{{{-5, -5}, {5, 5}}, {Rect{{1.0, -0.2}, {1.2, 0.2}}}};
  const RobotModel arm = RobotModel::planar_arm(Pose2(0, 0, 0), {1.0, 1.0}, 0.05);
  const double straight[] = {0.0, 0.0};
  const double up[] = {kPi / 2, 0.0};
  EXPECT_TRUE(robot_env_collides(arm, straight, env));
  EXPECT_FALSE(robot_env_collides(arm, up, env));
}

TEST(Geometry, AgreesWithOracleOnRandomArms) {
  Rng rng(11);
  const RobotModel a = RobotModel::planar_arm(Pose2(0, 0, 0), {0.3, 0.3, 0.3, 0.3, 0.3}, 0.05);
  const RobotModel b = RobotModel::planar_arm(Pose2(1.5, 0, kPi), {0.3, 0.3, 0.3, 0.3, 0.3}, 0.05);
  int collisions = 0;
  for (int k = 0; k < 2000; ++k) {
    Configuration ca, cb;
    ca.dof = cb.dof = 5;
    for (int i = 0; i < 5; ++i) {
      ca[i] = rng.uniform(-1.0, 1.0);
      cb[i] = rng.uniform(-1.0, 1.0);
    }
    const bool lib = robots_collide(a, ca.view(), b, cb.view());
    const bool ref = oracle::overlap(oracle::shape(a, ca), oracle::shape(b, cb));
    EXPECT_EQ(lib, ref) << "sample " << k;
    collisions += lib;
  }
  EXPECT_GT(collisions, 0);
}

TEST(Geometry, ModelValidation) {
  EXPECT_THROW(RobotModel::disc(0.0), std::invalid_argument);
  EXPECT_THROW(RobotModel::planar_arm(Pose2{}, {}, 0.05), std::invalid_argument);
  EXPECT_THROW(RobotModel::planar_arm(Pose2{}, std::vector<double>(6, 0.2), 0.05), std::invalid_argument);
  EXPECT_THROW(RobotModel::planar_arm(Pose2{}, {0.2, -0.1}, 0.05), std::invalid_argument);
  EXPECT_THROW(RobotModel::planar_arm(Pose2{}, {0.2}, 0.0), std::invalid_argument);
  const RobotModel arm = RobotModel::planar_arm(Pose2{}, {0.2, 0.3}, 0.05);
  EXPECT_EQ(arm.dof(), 2u);
  EXPECT_DOUBLE_EQ(arm.reach(), 0.5);
  const double wrong[] = {0.0};
  EXPECT_THROW(body_at(arm, wrong), std::invalid_argument);
}

TEST(Geometry, EnvironmentValidation) {
  EXPECT_THROW((Environment{{{0, 0}, {0, 5}}, {}}.validate()), std::invalid_argument);
  EXPECT_THROW((Environment{{{0, 0}, {5, 5}}, {Circle{{1, 1}, 0.0}}}.validate()), std::invalid_argument);
  EXPECT_THROW((Environment{{{0, 0}, {5, 5}}, {Rect{{9, 9}, {10, 10}}}}.validate()), std::invalid_argument);
  EXPECT_NO_THROW((Environment{{{0, 0}, {5, 5}}, {Rect{{1, 1}, {2, 2}}}}.validate()));
}

TEST(Geometry, ClippedKeepsTouchingObstacles) {
  Environment env{{{0, 0}, {10, 10}}, {Circle{{1, 1}, 0.5}, Circle{{8, 8}, 0.5}}};
  const auto c = env.clipped({{0, 0}, {4, 4}});
  EXPECT_EQ(c.obstacles.size(), 1u);
  EXPECT_EQ(c.boundary, (Rect{{0, 0}, {4, 4}}));
}
