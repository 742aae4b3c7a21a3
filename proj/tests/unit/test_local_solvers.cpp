#include <gtest/gtest.h>

#include "earc/planners.hpp"
#include "oracle.hpp"

using namespace earc;

namespace {

Problem swap_problem(const Environment& env) {
  Problem p;
  p.env = env;
  const RobotModel d = RobotModel::disc(0.4);
  p.robots = {d, d, d};
  p.queries = {{Configuration({1, 3, 0}, 0), Configuration({5, 3, 0}, 0)},
               {Configuration({5, 3, 0}, 1), Configuration({1, 3, 0}, 1)},
               {Configuration({3, 1, 0}, 2), Configuration({3, 5, 0}, 2)}};
  return p;
}

const Environment kRoom{{{0, 0}, {6, 6}}, {}};

}  // namespace

TEST(LocalSolvers, DecoupledSolvesThreeWayCrossing) {
  const Problem p = swap_problem(kRoom);
  const auto paths = decoupled_prm_solve(whole_problem(p), PrmParams{200, 8, 0.0, 3});
  ASSERT_TRUE(paths.has_value());
  EXPECT_EQ(oracle::violation(p, *paths), "");
  for (std::size_t r = 0; r < paths->size(); ++r) EXPECT_EQ((*paths)[r].robot_index, static_cast<int>(r));
}

TEST(LocalSolvers, CoupledSolvesThreeWayCrossingOnOneClock) {
  const Problem p = swap_problem(kRoom);
  const auto paths = coupled_prm_solve(whole_problem(p), PrmParams{300, 10, 0.0, 3});
  ASSERT_TRUE(paths.has_value());
  EXPECT_EQ(oracle::violation(p, *paths), "");
  EXPECT_EQ((*paths)[0].size(), (*paths)[2].size());
}

TEST(LocalSolvers, CoupledUsesStraightEdgeWhenFree) {
  Problem p = swap_problem(kRoom);
  p.queries.pop_back();
  p.robots.pop_back();
  p.queries[1] = {Configuration({1, 5, 0}, 1), Configuration({5, 5, 0}, 1)};
  const auto paths = coupled_prm_solve(whole_problem(p), PrmParams{50, 5, 0.0, 3});
  ASSERT_TRUE(paths.has_value());
  for (const auto& path : *paths) {
    for (const auto& c : path.configs) EXPECT_NEAR(c[1], path.front()[1], 1e-12);
  }
}

TEST(LocalSolvers, InvalidEndpointsFail) {
  const Environment env{{{0, 0}, {6, 6}}, {Circle{{5, 3}, 0.3}}};
  const Problem p = swap_problem(env);
  EXPECT_FALSE(decoupled_prm_solve(whole_problem(p), PrmParams{50, 5, 0.0, 1}).has_value());
  EXPECT_FALSE(coupled_prm_solve(whole_problem(p), PrmParams{50, 5, 0.0, 1}).has_value());
}

TEST(LocalSolvers, DeterministicPerSeed) {
  const Environment env{{{0, 0}, {6, 6}}, {Circle{{3, 3}, 0.6}}};
  const Problem p = swap_problem(env);
  const auto a = decoupled_prm_solve(whole_problem(p), PrmParams{200, 8, 0.0, 5});
  const auto b = decoupled_prm_solve(whole_problem(p), PrmParams{200, 8, 0.0, 5});
  ASSERT_TRUE(a && b);
  EXPECT_EQ(*a, *b);
  EXPECT_EQ(oracle::violation(p, *a), "");
}

TEST(LocalSolvers, ObstacleForcesDetour) {
  const Environment env{{{0, 0}, {6, 6}}, {Rect{{2.5, 2.0}, {3.5, 4.0}}}};
  Problem p = swap_problem(env);
  p.queries.pop_back();
  p.robots.pop_back();
  const auto paths = coupled_prm_solve(whole_problem(p), PrmParams{300, 10, 0.0, 8});
  ASSERT_TRUE(paths.has_value());
  EXPECT_EQ(oracle::violation(p, *paths), "");
}

TEST(LocalSolvers, HonoursDeadline) {
  const Problem p = swap_problem(kRoom);
  EXPECT_THROW(coupled_prm_solve(whole_problem(p), PrmParams{5000, 10, 0.0, 1}, CheckSettings{}, Deadline::after(0)),
               DeadlineExceeded);
}
