#pragma once

// Timed paths on the global unit-timestep grid, first-conflict detection and
// splicing of local solutions into full paths.

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "earc/cspace.hpp"

namespace earc {

/// Configurations of one robot at t = 0, 1, 2, ...; after its last entry the
/// robot waits at its goal.
struct TimedPath {
  int robot_index = 0;
  std::vector<Configuration> configs;

  std::size_t size() const { return configs.size(); }
  bool empty() const { return configs.empty(); }
  int horizon() const { return static_cast<int>(configs.size()) - 1; }

  const Configuration& at(int t) const {
    if (t <= 0) return configs.front();
    if (t >= static_cast<int>(configs.size())) return configs.back();
    return configs[static_cast<std::size_t>(t)];
  }
  const Configuration& front() const { return configs.front(); }
  const Configuration& back() const { return configs.back(); }

  friend bool operator==(const TimedPath&, const TimedPath&) = default;
};

/// Robot-robot collision at timestep t: the bodies overlap somewhere in the
/// interval [t, t+1] at configurations c_i and c_j.
struct Conflict {
  int robot_i = 0;
  int robot_j = 0;
  Configuration c_i;
  Configuration c_j;
  int t = 0;
};

/// Resamples a raw configuration sequence so each step moves at most
/// `arc_step`; every raw vertex is kept, so each step lies on one raw edge.
inline TimedPath discretize(std::span<const Configuration> raw, const RobotModel& model, double arc_step) {
  if (raw.empty()) throw std::invalid_argument("cannot discretize an empty configuration sequence");
  if (!(arc_step > 0.0)) throw std::invalid_argument("arc step must be positive");
  TimedPath out;
  out.robot_index = raw.front().robot_index;
  out.configs.push_back(raw.front());
  for (std::size_t k = 1; k < raw.size(); ++k) {
    const Configuration& a = out.configs.back();
    const Configuration& b = raw[k];
    const double d = distance(a, b, model);
    if (d == 0.0) continue;
    const int n = std::max(1, static_cast<int>(std::ceil(d / arc_step - 1e-12)));
    const Configuration from = a;
    for (int i = 1; i <= n; ++i) out.configs.push_back(interpolate(from, b, static_cast<double>(i) / n, model));
  }
  return out;
}

/// Composite analogue of discretize: all robots share one clock.
inline std::vector<TimedPath> discretize_composite(std::span<const CompositeConfiguration> raw,
                                                   std::span<const RobotModel> models,
                                                   double step_cap = 0.0) {
  if (raw.empty()) throw std::invalid_argument("cannot discretize an empty composite sequence");
  std::vector<TimedPath> out(raw.front().size());
  for (std::size_t r = 0; r < out.size(); ++r) {
    out[r].robot_index = raw.front()[r].robot_index;
    out[r].configs.push_back(raw.front()[r]);
  }
  CompositeConfiguration prev = raw.front();
  for (std::size_t k = 1; k < raw.size(); ++k) {
    const CompositeConfiguration& next = raw[k];
    if (composite_distance(prev, next, models) == 0.0) continue;
    const int n = composite_steps(prev, next, models, step_cap);
    for (int i = 1; i <= n; ++i) {
      const double s = static_cast<double>(i) / n;
      for (std::size_t r = 0; r < out.size(); ++r) {
        out[r].configs.push_back(interpolate(prev[r], next[r], s, models[r]));
      }
    }
    prev = next;
  }
  return out;
}

/// Repeats the goal so the path has T + 1 entries.
inline TimedPath pad_to(TimedPath path, int T) {
  if (path.empty()) throw std::invalid_argument("cannot pad an empty path");
  if (T < path.horizon()) throw std::invalid_argument("pad target shorter than path");
  path.configs.resize(static_cast<std::size_t>(T) + 1, path.configs.back());
  return path;
}

/// Drops trailing repetitions of the final configuration.
inline TimedPath trim_padding(TimedPath path) {
  while (path.configs.size() > 1 && path.configs[path.configs.size() - 2] == path.configs.back()) {
    path.configs.pop_back();
  }
  return path;
}

inline int common_horizon(std::span<const TimedPath> paths) {
  int T = 0;
  for (const auto& p : paths) T = std::max(T, p.horizon());
  return T;
}

inline void pad_all(std::vector<TimedPath>& paths) {
  const int T = common_horizon(paths);
  for (auto& p : paths) p = pad_to(std::move(p), T);
}

/// Scans t = 0..T; at each t every pair (i < j) is checked at sub_steps + 1
/// evenly spaced points of [t, t+1] (both ends included). Returns the
/// earliest conflict, ties broken by the smallest robot pair. Under
/// conservative settings the checks are inflated by pair_margin so that a
/// clean result certifies the continuous motion.
inline std::optional<Conflict> find_first_conflict(std::span<const TimedPath> paths,
                                                   std::span<const RobotModel> models,
                                                   const CheckSettings& checks) {
  if (paths.size() != models.size()) throw std::invalid_argument("one model per path required");
  const std::size_t n = paths.size();
  if (n < 2) return std::nullopt;
  for (const auto& p : paths) {
    if (p.empty()) throw std::invalid_argument("empty path");
  }
  const int ss = std::max(1, checks.sub_steps);
  const int T = common_horizon(paths);

  std::vector<std::vector<double>> margins(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) margins[i][j] = pair_margin(models[i], models[j], checks);
  }

  std::vector<std::vector<Body>> bodies(n, std::vector<Body>(static_cast<std::size_t>(ss) + 1));
  std::vector<Rect> swept(n);
  std::vector<int> samples(n);
  auto config_at = [&](std::size_t r, int t, int s) {
    const Configuration& a = paths[r].at(t);
    if (s == 0) return a;
    const Configuration& b = paths[r].at(t + 1);
    if (s == ss) return b;
    return interpolate(a, b, static_cast<double>(s) / ss, models[r]);
  };

  for (int t = 0; t <= T; ++t) {
    for (std::size_t r = 0; r < n; ++r) {
      const bool moving = t < T && !(paths[r].at(t) == paths[r].at(t + 1));
      samples[r] = moving ? ss + 1 : 1;
      for (int s = 0; s < samples[r]; ++s) {
        bodies[r][static_cast<std::size_t>(s)] = body_at(models[r], config_at(r, t, s).view());
      }
      Rect sw = bodies[r][0].bounds;
      for (int s = 1; s < samples[r]; ++s) sw = sw.hull(bodies[r][static_cast<std::size_t>(s)].bounds);
      swept[r] = sw;
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double m = margins[i][j];
        if (!swept[i].inflated(m).intersects(swept[j])) continue;
        const int count = t < T ? ss + 1 : 1;
        for (int s = 0; s < count; ++s) {
          const Body& bi = bodies[i][static_cast<std::size_t>(std::min(s, samples[i] - 1))];
          const Body& bj = bodies[j][static_cast<std::size_t>(std::min(s, samples[j] - 1))];
          if (bodies_collide(bi, bj, m)) {
            Conflict c;
            c.robot_i = paths[i].robot_index;
            c.robot_j = paths[j].robot_index;
            c.c_i = samples[i] > 1 ? config_at(i, t, s) : paths[i].at(t);
            c.c_j = samples[j] > 1 ? config_at(j, t, s) : paths[j].at(t);
            c.t = t;
            if (c.robot_i > c.robot_j) {
              std::swap(c.robot_i, c.robot_j);
              std::swap(c.c_i, c.c_j);
            }
            return c;
          }
        }
      }
    }
  }
  return std::nullopt;
}

/// Exact (uninflated) scan with `sub_steps` interpolated checks per timestep.
inline std::optional<Conflict> find_first_conflict(std::span<const TimedPath> paths,
                                                   std::span<const RobotModel> models, int sub_steps = 4) {
  return find_first_conflict(paths, models, CheckSettings::exact(sub_steps));
}

namespace detail {

inline bool nearly_equal(const Configuration& a, const Configuration& b, double tol = 1e-9) {
  if (a.dof != b.dof) return false;
  for (std::size_t i = 0; i < a.dof; ++i) {
    if (std::abs(a[i] - b[i]) > tol) return false;
  }
  return true;
}

}  // namespace detail

/// Replaces full[t_start..t_end] with `local`, whose endpoints must match
/// the replaced window's endpoints.
inline TimedPath splice(const TimedPath& full, const TimedPath& local, int t_start, int t_end) {
  if (local.empty()) throw std::invalid_argument("cannot splice an empty local path");
  if (t_start < 0 || t_end < t_start || t_end > full.horizon()) {
    throw std::invalid_argument("splice window [" + std::to_string(t_start) + ", " + std::to_string(t_end) +
                                "] outside path of horizon " + std::to_string(full.horizon()));
  }
  if (!detail::nearly_equal(local.front(), full.configs[static_cast<std::size_t>(t_start)]) ||
      !detail::nearly_equal(local.back(), full.configs[static_cast<std::size_t>(t_end)])) {
    throw std::invalid_argument("local path endpoints do not match the replaced window");
  }
  TimedPath out;
  out.robot_index = full.robot_index;
  out.configs.reserve(full.size() - static_cast<std::size_t>(t_end - t_start + 1) + local.size());
  out.configs.insert(out.configs.end(), full.configs.begin(), full.configs.begin() + t_start);
  out.configs.insert(out.configs.end(), local.configs.begin(), local.configs.end());
  out.configs.insert(out.configs.end(), full.configs.begin() + t_end + 1, full.configs.end());
  for (auto& c : out.configs) c.robot_index = full.robot_index;
  return out;
}

}  // namespace earc
