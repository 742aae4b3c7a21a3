#include <gtest/gtest.h>

#include <algorithm>

#include "earc/experience.hpp"
#include "oracle.hpp"

using namespace earc;

namespace {

const RobotModel kDisc = RobotModel::disc(0.5);
const RobotModel kArm = RobotModel::planar_arm(Pose2{}, {0.3, 0.3, 0.3, 0.3, 0.3}, 0.05);

Subproblem mobile_sub(const std::vector<Query>& queries, const Environment& env) {
  Subproblem s;
  s.env = env;
  for (std::size_t r = 0; r < queries.size(); ++r) {
    s.robots.push_back(static_cast<int>(r) + 10);
    s.models.push_back(kDisc);
    Query q = queries[r];
    q.start.robot_index = q.goal.robot_index = s.robots.back();
    s.queries.push_back(q);
    s.region.push_back(full_box(kDisc, env.boundary));
  }
  return s;
}

Subproblem arm_pair(Pose2 a, Pose2 b, const Query& qa, const Query& qb) {
  Subproblem s;
  s.env.boundary = Rect{{-10, -10}, {10, 10}};
  RobotModel ma = kArm, mb = kArm;
  ma.base = a;
  mb.base = b;
  s.models = {ma, mb};
  s.robots = {0, 1};
  s.queries = {qa, qb};
  for (auto& q : s.queries) q.start.robot_index = q.goal.robot_index = static_cast<int>(&q - s.queries.data());
  for (const auto& m : s.models) s.region.push_back(full_box(m, s.env.boundary));
  return s;
}

Database mobile_db(int per_key = 60) {
  DatabaseBuildParams p;
  p.counts = {{TransformKey::mobile(2), per_key}, {TransformKey::mobile(3), per_key / 2}};
  p.seed = 17;
  return build_database(kDisc, p);
}

Configuration random_arm(Rng& rng, int robot) {
  Configuration c;
  c.dof = 5;
  c.robot_index = robot;
  for (int i = 0; i < 5; ++i) c[i] = rng.uniform(-kPi, kPi);
  return c;
}

double oracle_tuple_distance(const std::vector<Query>& a, const std::vector<Query>& b, const RobotModel& m) {
  double d = 0.0;
  for (std::size_t r = 0; r < a.size(); ++r) {
    d += oracle::config_gap(a[r].start, b[r].start, m) + oracle::config_gap(a[r].goal, b[r].goal, m);
  }
  return d;
}

}  // namespace

TEST(Experience, PairKeyIsCanonicalAndInvariant) {
  const Pose2 a(0, 0, 0), b(1.5, 0, kPi);
  const KeyMatch ab = classify_pair(a, b);
  const KeyMatch ba = classify_pair(b, a);
  EXPECT_EQ(ab.key, ba.key);
  EXPECT_NE(ab.inverted, ba.inverted);
  EXPECT_EQ(ab.key.rel[0], 15);
  EXPECT_EQ(ab.key.rel[1], 0);
  EXPECT_EQ(std::abs(ab.key.rel[2]), kHeadingSlots / 2);
  // The relative transform is unchanged by moving the pair rigidly along y.
  EXPECT_EQ(classify_pair(Pose2(0, 4, 0), Pose2(1.5, 4, kPi)).key, ab.key);
  EXPECT_NE(classify_pair(Pose2(0, 0, 0), Pose2(2.0, 0, kPi)).key, ab.key);
}

TEST(Experience, ClassifyByGroup) {
  const std::vector<RobotModel> two{kDisc, kDisc}, five(5, kDisc), mixed{kDisc, kArm};
  EXPECT_EQ(classify(two)->key, TransformKey::mobile(2));
  EXPECT_FALSE(classify(five).has_value());
  EXPECT_FALSE(classify(mixed).has_value());
  EXPECT_EQ(TransformKey::mobile(3).label(), "mobile-3");
}

TEST(Experience, NoveltyGate) {
  Database db;
  db.robots = {kDisc};
  const Environment env{{{-5, -5}, {5, 5}}, {}};
  const Subproblem s = mobile_sub({{Configuration{-1, 0, 0}, Configuration{1, 0, 0}},
                                   {Configuration{0, -1, 0}, Configuration{0, 1, 0}}},
                                  env);
  LocalPaths paths;
  for (const auto& q : s.queries) paths.push_back(TimedPath{q.start.robot_index, {q.start, q.goal}});
  const auto e = make_entry(TransformKey::mobile(2), s, paths);
  EXPECT_TRUE(insert_if_novel(db, e, 0.5));
  EXPECT_FALSE(insert_if_novel(db, e, 0.5));
  Subproblem moved = s;
  moved.queries[0].goal[0] += 0.6;
  auto e2 = make_entry(TransformKey::mobile(2), moved, paths);
  EXPECT_TRUE(insert_if_novel(db, e2, 0.5));
  EXPECT_EQ(db.size(), 2u);
  EXPECT_EQ(db.bucket(TransformKey::mobile(2))->back().id, 1u);
}

TEST(Experience, BuiltEntriesAreCollisionFreeAndNovel) {
  const Database db = mobile_db();
  ASSERT_EQ(db.bucket(TransformKey::mobile(2))->size(), 60u);
  ASSERT_EQ(db.bucket(TransformKey::mobile(3))->size(), 30u);
  for (const auto& [key, bucket] : db.buckets) {
    for (std::size_t i = 0; i < bucket.size(); ++i) {
      const auto& e = bucket[i];
      Problem p;
      p.env.boundary = Rect{{-100, -100}, {100, 100}};
      p.robots.assign(e.queries.size(), kDisc);
      p.queries = e.queries;
      ASSERT_EQ(oracle::violation(p, e.paths), "");
      for (std::size_t j = 0; j < i; ++j) {
        EXPECT_GE(oracle_tuple_distance(e.queries, bucket[j].queries, kDisc), db.delta);
      }
    }
  }
}

TEST(Experience, KClosestMatchesLinearScan) {
  const Database db = mobile_db();
  const auto& bucket = *db.bucket(TransformKey::mobile(2));
  Rng rng(99);
  const Environment env{{{-20, -20}, {20, 20}}, {}};
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<Query> qs;
    for (int r = 0; r < 2; ++r) {
      qs.push_back({Configuration({rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-kPi, kPi)}),
                    Configuration({rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-kPi, kPi)})});
    }
    const Subproblem s = mobile_sub(qs, env);
    double cx = 0, cy = 0;
    for (const auto& q : qs) {
      cx += q.start[0] + q.goal[0];
      cy += q.start[1] + q.goal[1];
    }
    cx /= 4;
    cy /= 4;
    std::vector<Query> local = qs;
    for (auto& q : local) {
      q.start[0] -= cx, q.start[1] -= cy, q.goal[0] -= cx, q.goal[1] -= cy;
    }
    std::vector<std::pair<double, std::uint64_t>> ref;
    for (const auto& e : bucket) ref.emplace_back(oracle_tuple_distance(local, e.queries, kDisc), e.id);
    std::sort(ref.begin(), ref.end());
    const auto got = k_closest(db, s, 7);
    ASSERT_EQ(got.size(), 7u);
    for (std::size_t i = 0; i < got.size(); ++i) {
      EXPECT_EQ(got[i].entry->id, ref[i].second);
      EXPECT_NEAR(got[i].distance, ref[i].first, 1e-9);
    }
  }
}

TEST(Experience, RetrievalIsTranslationInvariantForMobileKeys) {
  const Database db = mobile_db();
  Rng rng(5);
  const Environment env{{{-50, -50}, {50, 50}}, {}};
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Query> qs;
    for (int r = 0; r < 3; ++r) {
      qs.push_back({Configuration({rng.uniform(-3, 3), rng.uniform(-3, 3), 0}),
                    Configuration({rng.uniform(-3, 3), rng.uniform(-3, 3), 0})});
    }
    const double dx = rng.uniform(-30, 30), dy = rng.uniform(-30, 30);
    std::vector<Query> moved = qs;
    for (auto& q : moved) q.start[0] += dx, q.start[1] += dy, q.goal[0] += dx, q.goal[1] += dy;
    const auto a = k_closest(db, mobile_sub(qs, env), 1);
    const auto b = k_closest(db, mobile_sub(moved, env), 1);
    ASSERT_EQ(a.size(), 1u);
    EXPECT_EQ(a[0].entry->id, b[0].entry->id);
  }
}

TEST(Experience, StoredSolutionIsReusedVerbatimElsewhere) {
  const Database db = mobile_db();
  const auto& e = db.bucket(TransformKey::mobile(2))->at(5);
  std::vector<Query> qs = e.queries;
  for (auto& q : qs) q.start[0] += 12, q.start[1] -= 7, q.goal[0] += 12, q.goal[1] -= 7;
  const Environment env{{{-30, -30}, {30, 30}}, {}};
  const Subproblem s = mobile_sub(qs, env);
  const auto res = database_planning(db, s, env);
  ASSERT_TRUE(res.has_value());
  EXPECT_EQ(res->entry_id, e.id);
  EXPECT_EQ(res->invalid_segments, 0);
  EXPECT_FALSE(res->repaired);
  Problem p;
  p.env = env;
  p.robots = s.models;
  for (auto& q : qs) p.queries.push_back(q);
  p.queries[0].start.robot_index = p.queries[0].goal.robot_index = 0;
  p.queries[1].start.robot_index = p.queries[1].goal.robot_index = 1;
  EXPECT_EQ(oracle::violation(p, res->paths), "");
  EXPECT_EQ(res->paths[0].robot_index, 10);
  EXPECT_NEAR(res->paths[0].configs[3][0], e.paths[0].configs[3][0] + 12, 1e-9);
}

TEST(Experience, ObstacleOnStoredPathIsRepairedOrRejected) {
  const Database db = mobile_db();
  RetrievalParams strict;
  strict.k = 1;
  strict.max_collisions = 0;
  RetrievalParams loose;
  loose.k = 1;
  loose.max_collisions = 1000;
  int probed = 0, repaired = 0;
  for (const auto& e : *db.bucket(TransformKey::mobile(2))) {
    const auto& mid = e.paths[0].configs[e.paths[0].size() / 2];
    const Environment env{{{-30, -30}, {30, 30}}, {Circle{{mid[0], mid[1]}, 0.2}}};
    const Subproblem s = mobile_sub(e.queries, env);
    bool clear = true;
    for (const auto& q : s.queries) {
      clear = clear && config_valid(q.start, kDisc, env, 0.2) && config_valid(q.goal, kDisc, env, 0.2);
    }
    if (!clear) continue;
    ++probed;
    EXPECT_FALSE(database_planning(db, s, env, strict).has_value());
    const auto res = database_planning(db, s, env, loose);
    if (!res) continue;
    ++repaired;
    EXPECT_TRUE(res->repaired);
    Problem p;
    p.env = env;
    p.robots = s.models;
    p.queries = e.queries;
    p.queries[0].start.robot_index = p.queries[0].goal.robot_index = 0;
    p.queries[1].start.robot_index = p.queries[1].goal.robot_index = 1;
    EXPECT_EQ(oracle::violation(p, res->paths), "");
    if (probed >= 10) break;
  }
  EXPECT_GT(probed, 0);
  EXPECT_GT(repaired, 0);
}

TEST(Experience, EmptyOrForeignBucketsMiss) {
  Database db;
  db.robots = {kDisc};
  const Environment env{{{-5, -5}, {5, 5}}, {}};
  const Subproblem s = mobile_sub({{Configuration{-1, 0, 0}, Configuration{1, 0, 0}},
                                   {Configuration{0, -1, 0}, Configuration{0, 1, 0}}},
                                  env);
  EXPECT_TRUE(k_closest(db, s, 5).empty());
  EXPECT_FALSE(database_planning(db, s, env).has_value());
}

TEST(Experience, ManipulatorInversionExchangesPaths) {
  DatabaseBuildParams p;
  const Pose2 a(0, 0, 0), b(1.5, 0, kPi);
  const KeyMatch key = classify_pair(a, b);
  p.counts = {{key.key, 40}};
  p.seed = 3;
  const Database db = build_database(kArm, p);
  Rng rng(8);
  int compared = 0;
  for (int trial = 0; trial < 30; ++trial) {
    Query qa{random_arm(rng, 0), random_arm(rng, 0)};
    Query qb{random_arm(rng, 1), random_arm(rng, 1)};
    const Subproblem fwd = arm_pair(a, b, qa, qb);
    const Subproblem rev = arm_pair(b, a, qb, qa);
    const auto r1 = database_planning(db, fwd, fwd.env);
    const auto r2 = database_planning(db, rev, rev.env);
    ASSERT_EQ(r1.has_value(), r2.has_value());
    const auto k1 = k_closest(db, fwd, 3), k2 = k_closest(db, rev, 3);
    ASSERT_EQ(k1.size(), k2.size());
    for (std::size_t i = 0; i < k1.size(); ++i) EXPECT_EQ(k1[i].entry->id, k2[i].entry->id);
    if (!r1) continue;
    ++compared;
    EXPECT_EQ(r1->entry_id, r2->entry_id);
    ASSERT_EQ(r1->paths.size(), 2u);
    for (int s = 0; s < 2; ++s) {
      const auto& x = r1->paths[static_cast<std::size_t>(s)].configs;
      const auto& y = r2->paths[static_cast<std::size_t>(1 - s)].configs;
      ASSERT_EQ(x.size(), y.size());
      for (std::size_t t = 0; t < x.size(); ++t) {
        EXPECT_TRUE(std::equal(x[t].values.begin(), x[t].values.end(), y[t].values.begin()));
      }
    }
  }
  EXPECT_GT(compared, 0);
}

TEST(Experience, GenerationRejectsWrongPrototype) {
  Rng rng(1);
  EXPECT_THROW(generate_random_subproblem(TransformKey::mobile(2), kArm, rng), std::invalid_argument);
  EXPECT_THROW(generate_random_subproblem(TransformKey::full_problem(2), kDisc, rng), std::invalid_argument);
}
