#pragma once

// Probabilistic roadmaps over single-robot and composite spaces.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "earc/cspace.hpp"
#include "earc/deadline.hpp"
#include "earc/random.hpp"

namespace earc {

class ConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PrmParams {
  int num_samples = 200;
  int k_neighbors = 8;
  /// Upper bound on motion between validated points; 0 uses each robot's
  /// validation step.
  double edge_step = 0.0;
  std::uint64_t seed = 1;

  static PrmParams subproblem_defaults() { return {200, 8, 0.0, 1}; }
  static PrmParams full_defaults() { return {500, 10, 0.0, 1}; }
};

/// The planning space of a roadmap: a robot group, its sampling boxes and
/// the environment the group must stay valid in.
struct Space {
  std::vector<RobotModel> models;
  std::vector<int> robot_indices;
  CBoundary region;
  Environment env;
  CheckSettings checks;

  std::size_t group_size() const { return models.size(); }

  bool valid(const CompositeConfiguration& c) const { return composite_config_valid(c, models, env, checks); }
  bool edge_valid(const CompositeConfiguration& a, const CompositeConfiguration& b) const {
    return composite_edge_valid(a, b, models, env, checks);
  }
  double distance(const CompositeConfiguration& a, const CompositeConfiguration& b) const {
    return composite_distance(a, b, models);
  }
};

class Roadmap {
 public:
  struct Edge {
    int to = 0;
    double weight = 0.0;
  };

  const Space& space() const { return space_; }
  const std::vector<CompositeConfiguration>& vertices() const { return vertices_; }
  const std::vector<std::vector<Edge>>& adjacency() const { return adjacency_; }
  int k_neighbors() const { return k_; }

  std::size_t edge_count() const {
    std::size_t n = 0;
    for (const auto& a : adjacency_) n += a.size();
    return n / 2;
  }

  /// Indices of the (up to) k vertices nearest to `c`, nearest first, ties by index.
  std::vector<int> nearest(const CompositeConfiguration& c, int k, int exclude = -1) const {
    std::vector<std::pair<double, int>> d;
    d.reserve(vertices_.size());
    for (int i = 0; i < static_cast<int>(vertices_.size()); ++i) {
      if (i != exclude) d.emplace_back(space_.distance(c, vertices_[static_cast<std::size_t>(i)]), i);
    }
    const std::size_t take = std::min(d.size(), static_cast<std::size_t>(std::max(0, k)));
    std::partial_sort(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(take), d.end());
    std::vector<int> out;
    out.reserve(take);
    for (std::size_t i = 0; i < take; ++i) out.push_back(d[i].second);
    return out;
  }

 private:
  friend Roadmap build_prm(Space space, const PrmParams& params, const Deadline& deadline);

  Space space_;
  std::vector<CompositeConfiguration> vertices_;
  std::vector<std::vector<Edge>> adjacency_;
  int k_ = 0;
};

/// Samples exactly num_samples valid composite vertices and connects each to
/// its k nearest neighbours through validated edges. Deterministic per seed.
inline Roadmap build_prm(Space space, const PrmParams& params, const Deadline& deadline = Deadline::never()) {
  if (params.num_samples <= 0 || params.k_neighbors <= 0) {
    throw std::invalid_argument("PRM sample and neighbour counts must be positive");
  }
  if (space.region.size() != space.models.size()) throw std::invalid_argument("one sampling box per robot required");
  if (space.robot_indices.empty()) {
    for (std::size_t r = 0; r < space.models.size(); ++r) space.robot_indices.push_back(static_cast<int>(r));
  }
  if (params.edge_step > 0.0) space.checks.step_cap = params.edge_step;

  Roadmap rm;
  rm.space_ = std::move(space);
  rm.k_ = params.k_neighbors;
  const Space& sp = rm.space_;
  Rng rng(params.seed);

  const long long budget = 100LL * params.num_samples;
  long long attempts = 0;
  while (static_cast<int>(rm.vertices_.size()) < params.num_samples) {
    if (attempts++ >= budget) {
      throw ConstructionError("could not find " + std::to_string(params.num_samples) +
                              " valid samples in " + std::to_string(budget) + " attempts");
    }
    if ((attempts & 63) == 0) deadline.check();
    CompositeConfiguration c;
    c.reserve(sp.models.size());
    for (std::size_t r = 0; r < sp.models.size(); ++r) {
      c.push_back(sample(sp.models[r], sp.region[r], rng, sp.robot_indices[r]));
    }
    if (sp.valid(c)) rm.vertices_.push_back(std::move(c));
  }

  const int n = static_cast<int>(rm.vertices_.size());
  rm.adjacency_.assign(static_cast<std::size_t>(n), {});
  std::set<std::pair<int, int>> tried;
  for (int i = 0; i < n; ++i) {
    deadline.check();
    for (int j : rm.nearest(rm.vertices_[static_cast<std::size_t>(i)], params.k_neighbors, i)) {
      const auto key = std::minmax(i, j);
      if (!tried.insert(key).second) continue;
      const auto& a = rm.vertices_[static_cast<std::size_t>(i)];
      const auto& b = rm.vertices_[static_cast<std::size_t>(j)];
      if (!sp.edge_valid(a, b)) continue;
      const double w = sp.distance(a, b);
      rm.adjacency_[static_cast<std::size_t>(i)].push_back({j, w});
      rm.adjacency_[static_cast<std::size_t>(j)].push_back({i, w});
    }
  }
  return rm;
}

/// Roadmap plus a start and goal connected to their nearest vertices (and to
/// each other when the direct edge is valid). Node ids: roadmap vertices,
/// then start (= vertex count), then goal.
class AttachedGraph {
 public:
  AttachedGraph(const Roadmap& roadmap, CompositeConfiguration start, CompositeConfiguration goal,
                const Deadline& deadline = Deadline::never())
      : roadmap_(&roadmap), start_(std::move(start)), goal_(std::move(goal)) {
    const Space& sp = roadmap.space();
    if (!sp.valid(start_)) throw std::invalid_argument("query start is invalid");
    if (!sp.valid(goal_)) throw std::invalid_argument("query goal is invalid");
    const int n = static_cast<int>(roadmap.vertices().size());
    extra_.assign(static_cast<std::size_t>(n) + 2, {});
    auto link = [&](int terminal, const CompositeConfiguration& c) {
      for (int v : roadmap.nearest(c, roadmap.k_neighbors())) {
        deadline.check();
        const auto& vc = roadmap.vertices()[static_cast<std::size_t>(v)];
        if (!sp.edge_valid(c, vc)) continue;
        const double w = sp.distance(c, vc);
        extra_[static_cast<std::size_t>(terminal)].push_back({v, w});
        extra_[static_cast<std::size_t>(v)].push_back({terminal, w});
      }
    };
    link(start_id(), start_);
    link(goal_id(), goal_);
    if (sp.edge_valid(start_, goal_)) {
      const double w = sp.distance(start_, goal_);
      extra_[static_cast<std::size_t>(start_id())].push_back({goal_id(), w});
      extra_[static_cast<std::size_t>(goal_id())].push_back({start_id(), w});
    }
  }

  int node_count() const { return static_cast<int>(roadmap_->vertices().size()) + 2; }
  int start_id() const { return static_cast<int>(roadmap_->vertices().size()); }
  int goal_id() const { return start_id() + 1; }
  const Roadmap& roadmap() const { return *roadmap_; }

  const CompositeConfiguration& config(int v) const {
    if (v == start_id()) return start_;
    if (v == goal_id()) return goal_;
    return roadmap_->vertices()[static_cast<std::size_t>(v)];
  }

  template <typename F>
  void for_each_edge(int v, F&& f) const {
    if (v < start_id()) {
      for (const auto& e : roadmap_->adjacency()[static_cast<std::size_t>(v)]) f(e);
    }
    for (const auto& e : extra_[static_cast<std::size_t>(v)]) f(e);
  }

  /// Dijkstra distances (edge weights) to the goal for every node.
  std::vector<double> distances_to_goal() const {
    return dijkstra(goal_id(), [](const Roadmap::Edge& e) { return e.weight; });
  }

  /// Dijkstra from the goal with a caller-supplied edge cost.
  template <typename Cost>
  std::vector<double> dijkstra(int source, Cost&& cost) const {
    std::vector<double> dist(static_cast<std::size_t>(node_count()), std::numeric_limits<double>::infinity());
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
    dist[static_cast<std::size_t>(source)] = 0.0;
    open.emplace(0.0, source);
    while (!open.empty()) {
      auto [d, v] = open.top();
      open.pop();
      if (d > dist[static_cast<std::size_t>(v)]) continue;
      for_each_edge(v, [&](const Roadmap::Edge& e) {
        const double nd = d + cost(e);
        if (nd < dist[static_cast<std::size_t>(e.to)]) {
          dist[static_cast<std::size_t>(e.to)] = nd;
          open.emplace(nd, e.to);
        }
      });
    }
    return dist;
  }

 private:
  const Roadmap* roadmap_;
  CompositeConfiguration start_;
  CompositeConfiguration goal_;
  std::vector<std::vector<Roadmap::Edge>> extra_;
};

/// Minimum-distance vertex sequence from start to goal, or nullopt when they
/// are disconnected. Invalid endpoints throw std::invalid_argument.
inline std::optional<std::vector<CompositeConfiguration>> query(const Roadmap& roadmap,
                                                                const CompositeConfiguration& start,
                                                                const CompositeConfiguration& goal,
                                                                const Deadline& deadline = Deadline::never()) {
  const Space& sp = roadmap.space();
  if (!sp.valid(start)) throw std::invalid_argument("query start is invalid");
  if (!sp.valid(goal)) throw std::invalid_argument("query goal is invalid");
  if (sp.distance(start, goal) == 0.0) return std::vector<CompositeConfiguration>{start};

  const AttachedGraph g(roadmap, start, goal, deadline);
  const std::vector<double> h = g.distances_to_goal();
  if (!std::isfinite(h[static_cast<std::size_t>(g.start_id())])) return std::nullopt;

  // The exact cost-to-go makes the greedy walk optimal.
  std::vector<CompositeConfiguration> out{g.config(g.start_id())};
  int v = g.start_id();
  for (int guard = 0; v != g.goal_id() && guard < g.node_count(); ++guard) {
    int best = -1;
    double best_cost = std::numeric_limits<double>::infinity();
    g.for_each_edge(v, [&](const Roadmap::Edge& e) {
      const double c = e.weight + h[static_cast<std::size_t>(e.to)];
      if (c < best_cost || (c == best_cost && e.to < best)) {
        best_cost = c;
        best = e.to;
      }
    });
    v = best;
    out.push_back(g.config(v));
  }
  if (v != g.goal_id()) return std::nullopt;
  return out;
}

/// Greedy shortcutting: from each kept vertex jump to the farthest later
/// vertex reachable by a valid straight edge.
inline std::vector<CompositeConfiguration> shortcut(const std::vector<CompositeConfiguration>& raw, const Space& space,
                                                   const Deadline& deadline = Deadline::never()) {
  if (raw.size() < 3) return raw;
  std::vector<CompositeConfiguration> out{raw.front()};
  std::size_t i = 0;
  while (i + 1 < raw.size()) {
    deadline.check();
    std::size_t j = raw.size() - 1;
    while (j > i + 1 && !space.edge_valid(raw[i], raw[j])) --j;
    out.push_back(raw[j]);
    i = j;
  }
  return out;
}

}  // namespace earc
