#pragma once

// Reference checks written without the library's geometry, interpolation or
// conflict code; only the plain data types are shared.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "earc/bench.hpp"

namespace oracle {

using earc::Configuration;
using earc::Problem;
using earc::RobotModel;
using earc::TimedPath;

struct P {
  double x, y;
};

struct Seg {
  P a, b;
};

inline double wrap(double a) {
  const double two_pi = 2.0 * 3.14159265358979323846;
  a = std::fmod(a, two_pi);
  if (a <= -two_pi / 2) a += two_pi;
  if (a > two_pi / 2) a -= two_pi;
  return a;
}

inline double pt_seg(P p, Seg s) {
  const double dx = s.b.x - s.a.x, dy = s.b.y - s.a.y;
  const double l2 = dx * dx + dy * dy;
  double t = l2 > 0 ? ((p.x - s.a.x) * dx + (p.y - s.a.y) * dy) / l2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p.x - (s.a.x + t * dx), p.y - (s.a.y + t * dy));
}

inline double cross(P o, P a, P b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); }

inline bool proper_cross(Seg s, Seg t) {
  const double d1 = cross(t.a, t.b, s.a), d2 = cross(t.a, t.b, s.b);
  const double d3 = cross(s.a, s.b, t.a), d4 = cross(s.a, s.b, t.b);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

inline double seg_seg(Seg s, Seg t) {
  if (proper_cross(s, t)) return 0.0;
  return std::min({pt_seg(s.a, t), pt_seg(s.b, t), pt_seg(t.a, s), pt_seg(t.b, s)});
}

struct Shape {
  std::vector<Seg> segs;
  double half_width = 0.0;
};

inline Shape shape(const RobotModel& m, const Configuration& c) {
  Shape out;
  if (m.is_disc()) {
    out.segs.push_back({{c[0], c[1]}, {c[0], c[1]}});
    out.half_width = m.radius;
    return out;
  }
  double x = m.base.position.x, y = m.base.position.y, a = m.base.heading;
  for (std::size_t i = 0; i < m.link_lengths.size(); ++i) {
    a += c[i];
    const double nx = x + m.link_lengths[i] * std::cos(a), ny = y + m.link_lengths[i] * std::sin(a);
    out.segs.push_back({{x, y}, {nx, ny}});
    x = nx;
    y = ny;
  }
  out.half_width = m.link_thickness;
  return out;
}

inline bool overlap(const Shape& a, const Shape& b) {
  for (const auto& s : a.segs) {
    for (const auto& t : b.segs) {
      if (seg_seg(s, t) < a.half_width + b.half_width) return true;
    }
  }
  return false;
}

inline bool hits_env(const Shape& s, const earc::Environment& env) {
  const double h = s.half_width;
  for (const auto& g : s.segs) {
    for (P v : {g.a, g.b}) {
      if (v.x - h < env.boundary.min.x || v.x + h > env.boundary.max.x || v.y - h < env.boundary.min.y ||
          v.y + h > env.boundary.max.y) {
        return true;
      }
    }
  }
  for (const auto& o : env.obstacles) {
    if (const auto* c = std::get_if<earc::Circle>(&o)) {
      for (const auto& g : s.segs) {
        if (pt_seg({c->center.x, c->center.y}, g) < c->radius + h) return true;
      }
    } else {
      const auto& r = std::get<earc::Rect>(o);
      const P corners[4] = {{r.min.x, r.min.y}, {r.max.x, r.min.y}, {r.max.x, r.max.y}, {r.min.x, r.max.y}};
      for (const auto& g : s.segs) {
        for (P v : {g.a, g.b}) {
          if (v.x > r.min.x && v.x < r.max.x && v.y > r.min.y && v.y < r.max.y) return true;
        }
        for (int e = 0; e < 4; ++e) {
          if (seg_seg(g, {corners[e], corners[(e + 1) % 4]}) < h) return true;
        }
      }
    }
  }
  return false;
}

inline Configuration lerp(const Configuration& a, const Configuration& b, double s, const RobotModel& m) {
  Configuration c = a;
  for (std::size_t i = 0; i < a.dof; ++i) {
    const bool angular = m.is_arm() || i == 2;
    c.values[i] = angular ? a[i] + s * wrap(b[i] - a[i]) : a[i] + s * (b[i] - a[i]);
  }
  return c;
}

inline const Configuration& at(const TimedPath& p, int t) {
  return p.configs[static_cast<std::size_t>(std::clamp(t, 0, static_cast<int>(p.configs.size()) - 1))];
}

inline bool same(const Configuration& a, const Configuration& b, const RobotModel& m) {
  if (a.dof != b.dof) return false;
  for (std::size_t i = 0; i < a.dof; ++i) {
    const bool angular = m.is_arm() || i == 2;
    const double d = angular ? wrap(a[i] - b[i]) : a[i] - b[i];
    if (std::abs(d) > 1e-9) return false;
  }
  return true;
}

/// Empty string when the paths solve the problem; otherwise a description
/// of the first violation. Every timestep interval is sampled `sub_steps`
/// times (both ends included).
inline std::string violation(const Problem& problem, const std::vector<TimedPath>& paths, int sub_steps = 8) {
  const std::size_t n = problem.size();
  if (paths.size() != n) return "path count " + std::to_string(paths.size()) + " != " + std::to_string(n);
  int T = 0;
  for (std::size_t r = 0; r < n; ++r) {
    if (paths[r].configs.empty()) return "empty path " + std::to_string(r);
    if (!same(paths[r].configs.front(), problem.queries[r].start, problem.robots[r])) {
      return "robot " + std::to_string(r) + " does not start at its start";
    }
    if (!same(paths[r].configs.back(), problem.queries[r].goal, problem.robots[r])) {
      return "robot " + std::to_string(r) + " does not end at its goal";
    }
    T = std::max(T, static_cast<int>(paths[r].configs.size()) - 1);
  }
  std::vector<Shape> shapes(n);
  for (int t = 0; t <= T; ++t) {
    for (int s = 0; s <= sub_steps; ++s) {
      if (t == T && s > 0) break;
      const double u = static_cast<double>(s) / sub_steps;
      for (std::size_t r = 0; r < n; ++r) {
        shapes[r] = shape(problem.robots[r], lerp(at(paths[r], t), at(paths[r], t + 1), u, problem.robots[r]));
        if (hits_env(shapes[r], problem.env)) {
          return "robot " + std::to_string(r) + " hits the environment at t=" + std::to_string(t) + "+" +
                 std::to_string(u);
        }
      }
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          if (overlap(shapes[i], shapes[j])) {
            return "robots " + std::to_string(i) + "," + std::to_string(j) + " collide at t=" + std::to_string(t) +
                   "+" + std::to_string(u);
          }
        }
      }
    }
  }
  return {};
}

struct BruteConflict {
  int t, i, j;
};

/// Earliest (t, i, j) with any of the sub_steps + 1 samples of [t, t+1]
/// overlapping; pairs scanned lexicographically within a timestep.
inline std::optional<BruteConflict> brute_first_conflict(const std::vector<TimedPath>& paths,
                                                         const std::vector<RobotModel>& models, int sub_steps) {
  int T = 0;
  for (const auto& p : paths) T = std::max(T, static_cast<int>(p.configs.size()) - 1);
  for (int t = 0; t <= T; ++t) {
    for (std::size_t i = 0; i < paths.size(); ++i) {
      for (std::size_t j = i + 1; j < paths.size(); ++j) {
        for (int s = 0; s <= sub_steps; ++s) {
          const double u = static_cast<double>(s) / sub_steps;
          const Shape a = shape(models[i], lerp(at(paths[i], t), at(paths[i], t + 1), u, models[i]));
          const Shape b = shape(models[j], lerp(at(paths[j], t), at(paths[j], t + 1), u, models[j]));
          if (overlap(a, b)) return BruteConflict{t, static_cast<int>(i), static_cast<int>(j)};
        }
      }
    }
  }
  return std::nullopt;
}

/// Unweighted Euclidean/angular query distance used as the retrieval oracle.
inline double config_gap(const Configuration& a, const Configuration& b, const RobotModel& m) {
  double sum = 0.0;
  if (m.is_disc()) {
    const double dx = a[0] - b[0], dy = a[1] - b[1], dh = m.radius * wrap(a[2] - b[2]);
    return std::sqrt(dx * dx + dy * dy + dh * dh);
  }
  for (std::size_t i = 0; i < a.dof; ++i) sum += wrap(a[i] - b[i]) * wrap(a[i] - b[i]);
  return m.reach() * std::sqrt(sum);
}

}  // namespace oracle
