#pragma once

// Planar primitives, robot bodies, environments and the exact collision
// predicates every validity check in the library is built on.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace earc {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Largest number of degrees of freedom of any supported robot.
inline constexpr std::size_t kMaxDof = 5;

/// Wraps an angle into [-pi, pi).
inline double wrap_angle(double a) {
  double w = a - kTwoPi * std::floor((a + kPi) / kTwoPi);
  if (w >= kPi) w -= kTwoPi;
  if (w < -kPi) w = -kPi;
  return w;
}

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
  friend bool operator==(Vec2, Vec2) = default;

  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double cross(Vec2 o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
  double squared_norm() const { return x * x + y * y; }

  Vec2 rotated(double angle) const {
    const double c = std::cos(angle), s = std::sin(angle);
    return {c * x - s * y, s * x + c * y};
  }
};

struct Pose2 {
  Vec2 position;
  double heading = 0.0;

  Pose2() = default;
  Pose2(Vec2 p, double h) : position(p), heading(wrap_angle(h)) {}
  Pose2(double x, double y, double h) : Pose2(Vec2{x, y}, h) {}

  friend bool operator==(const Pose2&, const Pose2&) = default;
};

struct Segment {
  Vec2 a;
  Vec2 b;
};

/// Axis-aligned rectangle; also used as the workspace boundary.
struct Rect {
  Vec2 min;
  Vec2 max;

  double width() const { return max.x - min.x; }
  double height() const { return max.y - min.y; }
  bool degenerate() const { return !(min.x < max.x && min.y < max.y); }
  bool contains(Vec2 p) const {
    return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y;
  }
  bool contains(const Rect& o) const {
    return o.min.x >= min.x && o.min.y >= min.y && o.max.x <= max.x &&
           o.max.y <= max.y;
  }
  bool intersects(const Rect& o) const {
    return min.x <= o.max.x && o.min.x <= max.x && min.y <= o.max.y &&
           o.min.y <= max.y;
  }
  Rect inflated(double d) const {
    return {{min.x - d, min.y - d}, {max.x + d, max.y + d}};
  }
  Rect intersection(const Rect& o) const {
    return {{std::max(min.x, o.min.x), std::max(min.y, o.min.y)},
            {std::min(max.x, o.max.x), std::min(max.y, o.max.y)}};
  }
  Rect hull(const Rect& o) const {
    return {{std::min(min.x, o.min.x), std::min(min.y, o.min.y)},
            {std::max(max.x, o.max.x), std::max(max.y, o.max.y)}};
  }
  double area() const { return degenerate() ? 0.0 : width() * height(); }

  friend bool operator==(const Rect&, const Rect&) = default;
};

struct Circle {
  Vec2 center;
  double radius = 0.0;

  friend bool operator==(const Circle&, const Circle&) = default;
};

using Obstacle = std::variant<Circle, Rect>;

inline Rect bounds_of(const Obstacle& o) {
  if (const auto* c = std::get_if<Circle>(&o)) {
    return {{c->center.x - c->radius, c->center.y - c->radius},
            {c->center.x + c->radius, c->center.y + c->radius}};
  }
  return std::get<Rect>(o);
}

struct Environment {
  Rect boundary;
  std::vector<Obstacle> obstacles;

  /// Throws std::invalid_argument when an invariant is violated.
  void validate() const {
    if (boundary.degenerate()) throw std::invalid_argument("degenerate environment boundary");
    for (const auto& o : obstacles) {
      if (const auto* c = std::get_if<Circle>(&o)) {
        if (!(c->radius > 0.0)) throw std::invalid_argument("circle obstacle radius must be positive");
      } else if (std::get<Rect>(o).degenerate()) {
        throw std::invalid_argument("rectangle obstacle must satisfy min < max");
      }
      if (!bounds_of(o).intersects(boundary)) {
        throw std::invalid_argument("obstacle lies outside the environment boundary");
      }
    }
  }

  /// Copy restricted to `box`: obstacles not touching it are dropped.
  Environment clipped(const Rect& box) const {
    Environment out{box, {}};
    for (const auto& o : obstacles) {
      if (bounds_of(o).intersects(box)) out.obstacles.push_back(o);
    }
    return out;
  }
};

enum class RobotKind { disc, planar_arm };

struct RobotModel {
  RobotKind kind = RobotKind::disc;
  double radius = 0.0;
  Pose2 base;
  std::vector<double> link_lengths;
  double link_thickness = 0.0;

  static RobotModel disc(double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("disc radius must be positive");
    RobotModel m;
    m.kind = RobotKind::disc;
    m.radius = radius;
    return m;
  }

  static RobotModel planar_arm(Pose2 base, std::vector<double> links, double thickness) {
    if (links.empty() || links.size() > kMaxDof) {
      throw std::invalid_argument("planar arm needs between 1 and 5 links");
    }
    for (double l : links) {
      if (!(l > 0.0)) throw std::invalid_argument("arm link lengths must be positive");
    }
    if (!(thickness > 0.0)) throw std::invalid_argument("arm link thickness must be positive");
    RobotModel m;
    m.kind = RobotKind::planar_arm;
    m.base = base;
    m.link_lengths = std::move(links);
    m.link_thickness = thickness;
    return m;
  }

  bool is_disc() const { return kind == RobotKind::disc; }
  bool is_arm() const { return kind == RobotKind::planar_arm; }

  std::size_t dof() const { return is_disc() ? 3 : link_lengths.size(); }

  double reach() const {
    double r = 0.0;
    for (double l : link_lengths) r += l;
    return r;
  }

  /// Disc radius or capsule half-width.
  double footprint() const { return is_disc() ? radius : link_thickness; }

  friend bool operator==(const RobotModel&, const RobotModel&) = default;
};

/// Up to kMaxDof capsules sharing one half-width. A disc is one degenerate capsule.
struct Body {
  std::array<Segment, kMaxDof> capsules{};
  std::size_t count = 0;
  double thickness = 0.0;
  Rect bounds;

  std::span<const Segment> segments() const { return {capsules.data(), count}; }
};

namespace detail {

inline void check_placement(const RobotModel& model, std::span<const double> placement) {
  if (placement.size() != model.dof()) {
    throw std::invalid_argument("placement has " + std::to_string(placement.size()) +
                                " values, robot expects " + std::to_string(model.dof()));
  }
}

inline double orient(Vec2 a, Vec2 b, Vec2 c) { return (b - a).cross(c - a); }

inline bool on_segment(Vec2 a, Vec2 b, Vec2 p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

inline bool segments_intersect(const Segment& s, const Segment& t) {
  const double d1 = orient(t.a, t.b, s.a);
  const double d2 = orient(t.a, t.b, s.b);
  const double d3 = orient(s.a, s.b, t.a);
  const double d4 = orient(s.a, s.b, t.b);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
      ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    return true;
  }
  if (d1 == 0 && on_segment(t.a, t.b, s.a)) return true;
  if (d2 == 0 && on_segment(t.a, t.b, s.b)) return true;
  if (d3 == 0 && on_segment(s.a, s.b, t.a)) return true;
  if (d4 == 0 && on_segment(s.a, s.b, t.b)) return true;
  return false;
}

}  // namespace detail

/// Forward kinematics of a planar serial arm: one segment per link, chained
/// from the base, with cumulative angle base heading + sum of joints so far.
inline std::vector<Segment> fk_planar_arm(const RobotModel& model, std::span<const double> joints) {
  if (!model.is_arm()) throw std::invalid_argument("fk_planar_arm requires a planar arm model");
  detail::check_placement(model, joints);
  std::vector<Segment> out;
  out.reserve(joints.size());
  Vec2 p = model.base.position;
  double angle = model.base.heading;
  for (std::size_t i = 0; i < joints.size(); ++i) {
    angle += joints[i];
    const Vec2 q = p + model.link_lengths[i] * Vec2{std::cos(angle), std::sin(angle)};
    out.push_back({p, q});
    p = q;
  }
  return out;
}

inline double point_segment_distance(Vec2 p, const Segment& s) {
  const Vec2 d = s.b - s.a;
  const double len2 = d.squared_norm();
  if (len2 <= 0.0) return (p - s.a).norm();
  const double t = std::clamp((p - s.a).dot(d) / len2, 0.0, 1.0);
  return (p - (s.a + t * d)).norm();
}

/// Exact minimum distance between two closed segments (0 iff they intersect).
inline double segment_segment_distance(const Segment& s1, const Segment& s2) {
  if (detail::segments_intersect(s1, s2)) return 0.0;
  const Vec2 d1 = s1.b - s1.a;
  const Vec2 d2 = s2.b - s2.a;
  const Vec2 r = s1.a - s2.a;
  const double a = d1.squared_norm();
  const double e = d2.squared_norm();
  const double f = d2.dot(r);
  constexpr double eps = 1e-300;
  double s = 0.0, t = 0.0;
  if (a <= eps && e <= eps) return r.norm();
  if (a <= eps) {
    t = std::clamp(f / e, 0.0, 1.0);
  } else {
    const double c = d1.dot(r);
    if (e <= eps) {
      s = std::clamp(-c / a, 0.0, 1.0);
    } else {
      const double b = d1.dot(d2);
      const double denom = a * e - b * b;
      s = denom > 0.0 ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
      t = (b * s + f) / e;
      if (t < 0.0) {
        t = 0.0;
        s = std::clamp(-c / a, 0.0, 1.0);
      } else if (t > 1.0) {
        t = 1.0;
        s = std::clamp((b - c) / a, 0.0, 1.0);
      }
    }
  }
  return ((s1.a + s * d1) - (s2.a + t * d2)).norm();
}

inline double segment_rect_distance(const Segment& s, const Rect& r) {
  if (r.contains(s.a) || r.contains(s.b)) return 0.0;
  const std::array<Segment, 4> edges{{{r.min, {r.max.x, r.min.y}},
                                      {{r.max.x, r.min.y}, r.max},
                                      {r.max, {r.min.x, r.max.y}},
                                      {{r.min.x, r.max.y}, r.min}}};
  double best = std::numeric_limits<double>::infinity();
  for (const auto& e : edges) best = std::min(best, segment_segment_distance(s, e));
  return best;
}

/// Body occupied by `model` at `placement` (disc: x, y, theta; arm: joints).
inline Body body_at(const RobotModel& model, std::span<const double> placement) {
  detail::check_placement(model, placement);
  Body body;
  if (model.is_disc()) {
    const Vec2 c{placement[0], placement[1]};
    body.capsules[0] = {c, c};
    body.count = 1;
    body.thickness = model.radius;
  } else {
    Vec2 p = model.base.position;
    double angle = model.base.heading;
    for (std::size_t i = 0; i < placement.size(); ++i) {
      angle += placement[i];
      const Vec2 q = p + model.link_lengths[i] * Vec2{std::cos(angle), std::sin(angle)};
      body.capsules[i] = {p, q};
      p = q;
    }
    body.count = placement.size();
    body.thickness = model.link_thickness;
  }
  Rect b{body.capsules[0].a, body.capsules[0].a};
  for (const auto& s : body.segments()) {
    for (Vec2 v : {s.a, s.b}) {
      b.min.x = std::min(b.min.x, v.x);
      b.min.y = std::min(b.min.y, v.y);
      b.max.x = std::max(b.max.x, v.x);
      b.max.y = std::max(b.max.y, v.y);
    }
  }
  body.bounds = b.inflated(body.thickness);
  return body;
}

/// Strict overlap test; `margin` inflates the sum of half-widths.
inline bool bodies_collide(const Body& a, const Body& b, double margin = 0.0) {
  if (!a.bounds.inflated(margin).intersects(b.bounds)) return false;
  const double limit = a.thickness + b.thickness + margin;
  for (const auto& s : a.segments()) {
    for (const auto& t : b.segments()) {
      if (segment_segment_distance(s, t) < limit) return true;
    }
  }
  return false;
}

/// Boundary exit or obstacle overlap. Tangency is collision-free.
inline bool body_env_collides(const Body& body, const Environment& env, double margin = 0.0) {
  const double th = body.thickness + margin;
  const Rect& bd = env.boundary;
  for (const auto& s : body.segments()) {
    for (Vec2 v : {s.a, s.b}) {
      if (v.x - th < bd.min.x || v.x + th > bd.max.x || v.y - th < bd.min.y ||
          v.y + th > bd.max.y) {
        return true;
      }
    }
  }
  const Rect reach = body.bounds.inflated(margin);
  for (const auto& o : env.obstacles) {
    if (!bounds_of(o).intersects(reach)) continue;
    if (const auto* c = std::get_if<Circle>(&o)) {
      for (const auto& s : body.segments()) {
        if (point_segment_distance(c->center, s) < c->radius + th) return true;
      }
    } else {
      const Rect& r = std::get<Rect>(o);
      for (const auto& s : body.segments()) {
        if (segment_rect_distance(s, r) < th) return true;
      }
    }
  }
  return false;
}

inline bool robots_collide(const RobotModel& model_i, std::span<const double> placement_i,
                           const RobotModel& model_j, std::span<const double> placement_j,
                           double margin = 0.0) {
  return bodies_collide(body_at(model_i, placement_i), body_at(model_j, placement_j), margin);
}

inline bool robot_env_collides(const RobotModel& model, std::span<const double> placement,
                               const Environment& env, double margin = 0.0) {
  return body_env_collides(body_at(model, placement), env, margin);
}

}  // namespace earc
