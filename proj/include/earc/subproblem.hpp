#pragma once

// Local subproblems around conflicts: creation, expansion and group merging.

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "earc/cspace.hpp"
#include "earc/paths.hpp"
#include "earc/problem.hpp"

namespace earc {

struct SubproblemParams {
  /// Timesteps kept on each side of the conflict.
  int window = 8;
  /// Clearance around the window's footprints; 0 means 2x the largest footprint.
  double boundary_inflation = 0.0;
  double growth_factor = 2.0;
  int max_generations = 6;

  void validate() const {
    if (window <= 0 || max_generations <= 0 || boundary_inflation < 0.0 || !(growth_factor > 1.0)) {
      throw std::invalid_argument("invalid subproblem parameters");
    }
  }
};

/// A reduced instance (local environment, robot subset, local queries)
/// cut out of the parent paths over the window [t_lo, t_hi].
struct Subproblem {
  Environment env;
  CBoundary region;
  std::vector<int> robots;
  std::vector<RobotModel> models;
  std::vector<Query> queries;
  int t_lo = 0;
  int t_hi = 0;
  int window = 0;
  int generation = 0;
  double inflation = 0.0;
  /// Window spans the whole parent paths and the boundary the whole environment.
  bool covers_problem = false;

  std::size_t size() const { return robots.size(); }

  CompositeConfiguration starts() const {
    CompositeConfiguration c;
    for (const auto& q : queries) c.push_back(q.start);
    return c;
  }
  CompositeConfiguration goals() const {
    CompositeConfiguration c;
    for (const auto& q : queries) c.push_back(q.goal);
    return c;
  }
};

namespace detail {

inline Rect body_bounds(const RobotModel& model, const Configuration& c) {
  return body_at(model, c.view()).bounds;
}

/// Builds the subproblem of `robots` over [t_lo, t_hi] on the parent paths.
/// `paths` and `models` are indexed by robot index.
inline Subproblem make_subproblem(std::vector<int> robots, int t_lo, int t_hi, int window, int generation,
                                  double inflation, std::span<const TimedPath> paths,
                                  std::span<const RobotModel> models, const Environment& env) {
  std::sort(robots.begin(), robots.end());
  robots.erase(std::unique(robots.begin(), robots.end()), robots.end());
  const int T = common_horizon(paths);
  t_lo = std::clamp(t_lo, 0, T);
  t_hi = std::clamp(t_hi, t_lo, T);

  Subproblem sub;
  sub.robots = robots;
  sub.t_lo = t_lo;
  sub.t_hi = t_hi;
  sub.window = window;
  sub.generation = generation;
  sub.inflation = inflation;

  bool any_disc = false;
  Rect box;
  bool have_box = false;
  auto grow = [&](const Rect& r) {
    box = have_box ? box.hull(r) : r;
    have_box = true;
  };
  for (int r : robots) {
    const auto& model = models[static_cast<std::size_t>(r)];
    const auto& path = paths[static_cast<std::size_t>(r)];
    sub.models.push_back(model);
    Query q{path.at(t_lo), path.at(t_hi)};
    q.start.robot_index = r;
    q.goal.robot_index = r;
    sub.queries.push_back(q);
    if (model.is_disc()) {
      any_disc = true;
      for (int t = t_lo; t <= t_hi; ++t) grow(body_bounds(model, path.at(t)));
    } else {
      const double reach = model.reach() + model.link_thickness;
      grow(Rect{model.base.position, model.base.position}.inflated(reach));
    }
  }

  Rect local = box.inflated(inflation).intersection(env.boundary);
  if (!any_disc) local = env.boundary;
  // Arms keep the global boundary; their locality comes from clipping
  // obstacles to the reachable workspace.
  sub.env = any_disc ? env.clipped(local) : Environment{env.boundary, env.clipped(box.inflated(inflation)).obstacles};
  for (std::size_t k = 0; k < robots.size(); ++k) {
    sub.region.push_back(full_box(sub.models[k], sub.env.boundary));
  }
  sub.covers_problem = t_lo == 0 && t_hi == T && local.contains(env.boundary);
  return sub;
}

inline double default_inflation(std::span<const RobotModel> models, std::span<const int> robots,
                                const SubproblemParams& params) {
  if (params.boundary_inflation > 0.0) return params.boundary_inflation;
  double f = 0.0;
  for (int r : robots) f = std::max(f, models[static_cast<std::size_t>(r)].footprint());
  return 2.0 * f;
}

}  // namespace detail

/// Subproblem around a conflict: the two robots, queries at t - window and
/// t + window (clamped), and a boundary around every window configuration.
inline Subproblem create_subproblem(const Conflict& conflict, std::span<const TimedPath> paths,
                                    std::span<const RobotModel> models, const Environment& env,
                                    const SubproblemParams& params) {
  params.validate();
  const std::vector<int> robots{conflict.robot_i, conflict.robot_j};
  const double infl = detail::default_inflation(models, robots, params);
  return detail::make_subproblem(robots, conflict.t - params.window, conflict.t + params.window, params.window, 0,
                                 infl, paths, models, env);
}

/// Pushes the queries further along the parent paths and grows the boundary.
/// Returns nullopt (saturated) when `sub` already equals the full problem.
inline std::optional<Subproblem> expand_subproblem(const Subproblem& sub, std::span<const TimedPath> paths,
                                                   std::span<const RobotModel> models, const Environment& env,
                                                   const SubproblemParams& params) {
  params.validate();
  if (sub.covers_problem) return std::nullopt;
  const int grow = std::max(1, static_cast<int>(std::ceil(sub.window * (params.growth_factor - 1.0))));
  return detail::make_subproblem(sub.robots, sub.t_lo - grow, sub.t_hi + grow, sub.window + grow,
                                 sub.generation + 1, sub.inflation * params.growth_factor, paths, models, env);
}

/// Union of both robot groups over the hull of both windows.
inline Subproblem merge_groups(const Subproblem& a, const Subproblem& b, std::span<const TimedPath> paths,
                               std::span<const RobotModel> models, const Environment& env,
                               const SubproblemParams& params) {
  params.validate();
  std::vector<int> robots = a.robots;
  robots.insert(robots.end(), b.robots.begin(), b.robots.end());
  return detail::make_subproblem(std::move(robots), std::min(a.t_lo, b.t_lo), std::max(a.t_hi, b.t_hi),
                                 std::max(a.window, b.window), std::max(a.generation, b.generation),
                                 std::max(a.inflation, b.inflation), paths, models, env);
}

}  // namespace earc
