#pragma once

// The two traditional subproblem solvers: prioritized (decoupled) PRM with
// space-time search against earlier robots, and composite (coupled) PRM.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "earc/deadline.hpp"
#include "earc/paths.hpp"
#include "earc/random.hpp"
#include "earc/roadmap.hpp"
#include "earc/subproblem.hpp"

namespace earc {

/// One timed path per subproblem robot, all sharing the local clock.
using LocalPaths = std::vector<TimedPath>;

namespace detail {

inline Space single_robot_space(const Subproblem& sub, std::size_t k, const CheckSettings& checks) {
  return Space{{sub.models[k]}, {sub.robots[k]}, {sub.region[k]}, sub.env, checks};
}

inline int edge_steps(double weight, double step) {
  return std::max(1, static_cast<int>(std::ceil(weight / step - 1e-12)));
}

/// Moving obstacles for the prioritized planner: earlier robots' timed paths
/// (waiting at their goals after the end), with bodies cached per sub-step.
class MovingObstacles {
 public:
  explicit MovingObstacles(const CheckSettings& checks) : checks_(checks), ss_(std::max(1, checks.sub_steps)) {}

  void add(const TimedPath& path, const RobotModel& model) {
    Track tr;
    tr.model = &model;
    tr.horizon = path.horizon();
    const std::size_t per = static_cast<std::size_t>(ss_) + 1;
    tr.bodies.resize(static_cast<std::size_t>(tr.horizon + 1) * per);
    tr.moving.assign(static_cast<std::size_t>(tr.horizon + 1), false);
    tr.swept.resize(static_cast<std::size_t>(tr.horizon + 1));
    for (int t = 0; t <= tr.horizon; ++t) {
      const Configuration& a = path.at(t);
      const Configuration& b = path.at(t + 1);
      const bool moving = t < tr.horizon && !(a == b);
      Body* out = &tr.bodies[static_cast<std::size_t>(t) * per];
      out[0] = body_at(model, a.view());
      Rect sw = out[0].bounds;
      if (moving) {
        for (int s = 1; s <= ss_; ++s) {
          out[s] = s == ss_ ? body_at(model, b.view())
                            : body_at(model, interpolate(a, b, static_cast<double>(s) / ss_, model).view());
          sw = sw.hull(out[s].bounds);
        }
      }
      tr.moving[static_cast<std::size_t>(t)] = moving;
      tr.swept[static_cast<std::size_t>(t)] = sw;
    }
    tracks_.push_back(std::move(tr));
  }

  int horizon() const {
    int T = 0;
    for (const auto& tr : tracks_) T = std::max(T, tr.horizon);
    return T;
  }

  bool empty() const { return tracks_.empty(); }

  /// True when moving from `a` (time t) to `b` (time t + 1) stays clear of
  /// every obstacle at all sub-steps.
  bool interval_clear(const RobotModel& model, const Configuration& a, const Configuration& b, int t) const {
    if (tracks_.empty()) return true;
    const bool moving = !(a == b);
    auto& own = scratch_;
    own.resize(static_cast<std::size_t>(ss_) + 1);
    own[0] = body_at(model, a.view());
    Rect sw = own[0].bounds;
    if (moving) {
      for (int s = 1; s <= ss_; ++s) {
        own[static_cast<std::size_t>(s)] =
            s == ss_ ? body_at(model, b.view())
                     : body_at(model, interpolate(a, b, static_cast<double>(s) / ss_, model).view());
        sw = sw.hull(own[static_cast<std::size_t>(s)].bounds);
      }
    }
    const std::size_t per = static_cast<std::size_t>(ss_) + 1;
    for (const auto& tr : tracks_) {
      const int to = std::clamp(t, 0, tr.horizon);
      const double m = pair_margin(model, *tr.model, checks_);
      if (!sw.inflated(m).intersects(tr.swept[static_cast<std::size_t>(to)])) continue;
      const Body* ob = &tr.bodies[static_cast<std::size_t>(to) * per];
      const bool o_moving = t >= 0 && t < tr.horizon && tr.moving[static_cast<std::size_t>(to)];
      const int count = moving || o_moving ? ss_ + 1 : 1;
      for (int s = 0; s < count; ++s) {
        const Body& bi = own[static_cast<std::size_t>(moving ? s : 0)];
        const Body& bo = ob[o_moving ? s : 0];
        if (bodies_collide(bi, bo, m)) return false;
      }
    }
    return true;
  }

  /// True when resting at `c` from time t on never meets an obstacle.
  bool rest_clear(const RobotModel& model, const Configuration& c, int t) const {
    const int T = horizon();
    for (int u = t; u <= std::max(t, T); ++u) {
      if (!interval_clear(model, c, c, u)) return false;
    }
    return true;
  }

 private:
  struct Track {
    const RobotModel* model = nullptr;
    int horizon = 0;
    std::vector<Body> bodies;
    std::vector<bool> moving;
    std::vector<Rect> swept;
  };

  CheckSettings checks_;
  int ss_;
  std::vector<Track> tracks_;
  mutable std::vector<Body> scratch_;
};

/// Time-expanded A* over an attached roadmap: move along edges (one
/// validation step per timestep) or wait, avoiding the moving obstacles.
inline std::optional<TimedPath> space_time_search(const AttachedGraph& g, const RobotModel& model,
                                                  const MovingObstacles& obstacles, double step,
                                                  const Deadline& deadline, int max_expansions = 40000) {
  const std::vector<double> h = g.dijkstra(g.goal_id(), [&](const Roadmap::Edge& e) {
    return static_cast<double>(edge_steps(e.weight, step));
  });
  const double h_start = h[static_cast<std::size_t>(g.start_id())];
  if (!std::isfinite(h_start)) return std::nullopt;

  const Configuration& start = g.config(g.start_id()).front();
  if (!obstacles.interval_clear(model, start, start, 0)) return std::nullopt;

  const int t_max = obstacles.horizon() + 2 * static_cast<int>(h_start) + 64;
  struct Node {
    int v;
    int t;
    int parent;
  };
  std::vector<Node> nodes;
  using Item = std::tuple<double, int, int>;  // f, -t, node
  std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
  std::unordered_set<std::uint64_t> closed;
  auto key = [&](int v, int t) {
    return static_cast<std::uint64_t>(v) * static_cast<std::uint64_t>(t_max + 2) + static_cast<std::uint64_t>(t);
  };
  std::unordered_map<std::uint64_t, std::vector<Configuration>> edge_cache;
  auto edge_configs = [&](int u, int v, double w) -> const std::vector<Configuration>& {
    auto it = edge_cache.find(key(u, 0) * static_cast<std::uint64_t>(g.node_count() + 1) + static_cast<std::uint64_t>(v));
    if (it != edge_cache.end()) return it->second;
    const Configuration& a = g.config(u).front();
    const Configuration& b = g.config(v).front();
    const int n = edge_steps(w, step);
    std::vector<Configuration> cs;
    cs.reserve(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) cs.push_back(interpolate(a, b, static_cast<double>(i) / n, model));
    return edge_cache
        .emplace(key(u, 0) * static_cast<std::uint64_t>(g.node_count() + 1) + static_cast<std::uint64_t>(v),
                 std::move(cs))
        .first->second;
  };

  nodes.push_back({g.start_id(), 0, -1});
  open.emplace(h_start, 0, 0);
  int expansions = 0;
  while (!open.empty()) {
    const auto [f, neg_t, id] = open.top();
    open.pop();
    const Node node = nodes[static_cast<std::size_t>(id)];
    if (!closed.insert(key(node.v, node.t)).second) continue;
    if (++expansions > max_expansions) return std::nullopt;
    if ((expansions & 255) == 0) deadline.check();

    const Configuration& here = g.config(node.v).front();
    if (node.v == g.goal_id() && obstacles.rest_clear(model, here, node.t)) {
      std::vector<int> chain;
      for (int i = id; i >= 0; i = nodes[static_cast<std::size_t>(i)].parent) chain.push_back(i);
      std::reverse(chain.begin(), chain.end());
      TimedPath out;
      out.robot_index = here.robot_index;
      out.configs.push_back(start);
      for (std::size_t k = 1; k < chain.size(); ++k) {
        const Node& prev = nodes[static_cast<std::size_t>(chain[k - 1])];
        const Node& cur = nodes[static_cast<std::size_t>(chain[k])];
        if (cur.v == prev.v) {
          out.configs.push_back(out.configs.back());
        } else {
          double w = 0.0;
          g.for_each_edge(prev.v, [&](const Roadmap::Edge& e) {
            if (e.to == cur.v) w = e.weight;
          });
          const auto& cs = edge_configs(prev.v, cur.v, w);
          out.configs.insert(out.configs.end(), cs.begin(), cs.end());
        }
      }
      return out;
    }
    if (node.t >= t_max) continue;

    // Wait in place.
    if (!closed.count(key(node.v, node.t + 1)) && obstacles.interval_clear(model, here, here, node.t)) {
      nodes.push_back({node.v, node.t + 1, id});
      open.emplace(node.t + 1 + h[static_cast<std::size_t>(node.v)], -(node.t + 1),
                   static_cast<int>(nodes.size()) - 1);
    }
    g.for_each_edge(node.v, [&](const Roadmap::Edge& e) {
      const double he = h[static_cast<std::size_t>(e.to)];
      if (!std::isfinite(he)) return;
      const auto& cs = edge_configs(node.v, e.to, e.weight);
      const int arrive = node.t + static_cast<int>(cs.size());
      if (arrive > t_max || closed.count(key(e.to, arrive))) return;
      Configuration prev = here;
      for (std::size_t i = 0; i < cs.size(); ++i) {
        if (!obstacles.interval_clear(model, prev, cs[i], node.t + static_cast<int>(i))) return;
        prev = cs[i];
      }
      nodes.push_back({e.to, arrive, id});
      open.emplace(arrive + he, -arrive, static_cast<int>(nodes.size()) - 1);
    });
  }
  return std::nullopt;
}

inline LocalPaths synchronized(LocalPaths paths) {
  pad_all(paths);
  return paths;
}

}  // namespace detail

/// Plans the subproblem robots one at a time in ascending index order; each
/// robot treats the earlier robots' timed paths as moving obstacles.
inline std::optional<LocalPaths> decoupled_prm_solve(const Subproblem& sub, const PrmParams& params,
                                                     const CheckSettings& checks = {},
                                                     const Deadline& deadline = Deadline::never()) {
  LocalPaths planned;
  planned.reserve(sub.size());
  detail::MovingObstacles obstacles(checks);
  for (std::size_t k = 0; k < sub.size(); ++k) {
    deadline.check();
    const RobotModel& model = sub.models[k];
    Space space = detail::single_robot_space(sub, k, checks);
    if (params.edge_step > 0.0) space.checks.step_cap = params.edge_step;
    const double step = effective_step(model, space.checks);
    const CompositeConfiguration start{sub.queries[k].start};
    const CompositeConfiguration goal{sub.queries[k].goal};
    if (!space.valid(start) || !space.valid(goal)) return std::nullopt;

    std::optional<TimedPath> path;
    if (space.edge_valid(start, goal)) {
      const std::vector<Configuration> raw{start.front(), goal.front()};
      TimedPath straight = discretize(raw, model, step);
      bool clear = true;
      for (int t = 0; t < straight.horizon() && clear; ++t) {
        clear = obstacles.interval_clear(model, straight.at(t), straight.at(t + 1), t);
      }
      if (clear && obstacles.rest_clear(model, straight.back(), straight.horizon())) path = std::move(straight);
    }
    if (!path) {
      PrmParams p = params;
      p.seed = derive_seed(params.seed, {static_cast<std::uint64_t>(k)});
      std::optional<Roadmap> roadmap;
      try {
        roadmap.emplace(build_prm(std::move(space), p, deadline));
      } catch (const ConstructionError&) {
        return std::nullopt;
      }
      const AttachedGraph g(*roadmap, start, goal, deadline);
      path = detail::space_time_search(g, model, obstacles, step, deadline);
    }
    if (!path) return std::nullopt;
    path->robot_index = sub.robots[k];
    for (auto& c : path->configs) c.robot_index = sub.robots[k];
    planned.push_back(std::move(*path));
    obstacles = detail::MovingObstacles(checks);
    for (std::size_t j = 0; j < planned.size(); ++j) obstacles.add(planned[j], sub.models[j]);
  }
  return detail::synchronized(std::move(planned));
}

/// Plans the whole group in its composite space and discretizes the
/// composite path onto one shared clock.
inline std::optional<LocalPaths> coupled_prm_solve(const Subproblem& sub, const PrmParams& params,
                                                   const CheckSettings& checks = {},
                                                   const Deadline& deadline = Deadline::never()) {
  Space space{sub.models, sub.robots, sub.region, sub.env, checks};
  if (params.edge_step > 0.0) space.checks.step_cap = params.edge_step;
  const double cap = space.checks.step_cap;
  const CompositeConfiguration start = sub.starts();
  const CompositeConfiguration goal = sub.goals();
  if (!space.valid(start) || !space.valid(goal)) return std::nullopt;
  if (space.edge_valid(start, goal)) {
    const std::vector<CompositeConfiguration> raw{start, goal};
    return discretize_composite(raw, sub.models, cap);
  }
  std::optional<Roadmap> roadmap;
  try {
    roadmap.emplace(build_prm(std::move(space), params, deadline));
  } catch (const ConstructionError&) {
    return std::nullopt;
  }
  const auto raw = query(*roadmap, start, goal, deadline);
  if (!raw) return std::nullopt;
  return discretize_composite(shortcut(*raw, roadmap->space(), deadline), sub.models, cap);
}

}  // namespace earc
