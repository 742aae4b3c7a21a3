#pragma once

// Per-robot and composite configuration spaces: sampling, the metric,
// geodesic interpolation and resolution-based edge validation.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

#include "earc/geometry.hpp"
#include "earc/random.hpp"

namespace earc {

/// Disc: [x, y, theta]. Arm: one angle per joint.
struct Configuration {
  std::array<double, kMaxDof> values{};
  std::uint8_t dof = 0;
  int robot_index = 0;

  Configuration() = default;
  Configuration(std::initializer_list<double> v, int robot = 0) : robot_index(robot) {
    if (v.size() > kMaxDof) throw std::invalid_argument("too many configuration values");
    std::copy(v.begin(), v.end(), values.begin());
    dof = static_cast<std::uint8_t>(v.size());
  }
  static Configuration from(std::span<const double> v, int robot = 0) {
    if (v.size() > kMaxDof) throw std::invalid_argument("too many configuration values");
    Configuration c;
    std::copy(v.begin(), v.end(), c.values.begin());
    c.dof = static_cast<std::uint8_t>(v.size());
    c.robot_index = robot;
    return c;
  }

  std::size_t size() const { return dof; }
  std::span<const double> view() const { return {values.data(), dof}; }
  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }

  friend bool operator==(const Configuration& a, const Configuration& b) {
    return a.dof == b.dof && a.robot_index == b.robot_index &&
           std::equal(a.values.begin(), a.values.begin() + a.dof, b.values.begin());
  }
};

/// One configuration per group member, ordered by robot index.
using CompositeConfiguration = std::vector<Configuration>;

/// Axis-aligned sampling box over one robot's configuration components.
struct ConfigBox {
  std::array<double, kMaxDof> lo{};
  std::array<double, kMaxDof> hi{};
  std::uint8_t dof = 0;

  friend bool operator==(const ConfigBox&, const ConfigBox&) = default;
};

/// Per-robot sampling boxes of a (sub)problem.
using CBoundary = std::vector<ConfigBox>;

inline bool is_angular(const RobotModel& model, std::size_t component) {
  return model.is_arm() || component == 2;
}

inline Configuration normalized(Configuration c, const RobotModel& model) {
  for (std::size_t i = 0; i < c.dof; ++i) {
    if (is_angular(model, i)) c.values[i] = wrap_angle(c.values[i]);
  }
  return c;
}

/// Box for the whole workspace (discs) or the full joint range (arms).
inline ConfigBox full_box(const RobotModel& model, const Rect& workspace) {
  ConfigBox box;
  box.dof = static_cast<std::uint8_t>(model.dof());
  if (model.is_disc()) {
    Rect r = workspace.inflated(-model.radius);
    if (r.degenerate()) r = workspace;
    box.lo = {r.min.x, r.min.y, -kPi};
    box.hi = {r.max.x, r.max.y, kPi};
  } else {
    for (std::size_t i = 0; i < box.dof; ++i) {
      box.lo[i] = -kPi;
      box.hi[i] = kPi;
    }
  }
  return box;
}

/// Uniform draw from `region`; angular components are wrapped.
inline Configuration sample(const RobotModel& model, const ConfigBox& region, Rng& rng, int robot_index = 0) {
  if (region.dof != model.dof()) throw std::invalid_argument("sampling region does not match robot DOF");
  Configuration c;
  c.dof = region.dof;
  c.robot_index = robot_index;
  for (std::size_t i = 0; i < region.dof; ++i) {
    const double lo = region.lo[i], hi = region.hi[i];
    const double v = lo == hi ? lo : rng.uniform(lo, hi);
    c.values[i] = is_angular(model, i) && lo != hi ? wrap_angle(v) : v;
  }
  return c;
}

namespace detail {

inline void check_same_dof(const Configuration& a, const Configuration& b, const RobotModel& model) {
  if (a.dof != b.dof || a.dof != model.dof()) {
    throw std::invalid_argument("configuration DOF mismatch");
  }
}

}  // namespace detail

/// Disc: planar Euclidean plus heading weighted by the radius.
/// Arm: wrapped joint-difference norm scaled by total reach.
inline double distance(const Configuration& a, const Configuration& b, const RobotModel& model) {
  detail::check_same_dof(a, b, model);
  if (model.is_disc()) {
    const double dx = b[0] - a[0], dy = b[1] - a[1];
    const double dth = model.radius * wrap_angle(b[2] - a[2]);
    return std::sqrt(dx * dx + dy * dy + dth * dth);
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.dof; ++i) {
    const double d = wrap_angle(b[i] - a[i]);
    sum += d * d;
  }
  return model.reach() * std::sqrt(sum);
}

/// Componentwise linear; angles follow the shorter arc. s = 0 and s = 1
/// return the endpoints exactly.
inline Configuration interpolate(const Configuration& a, const Configuration& b, double s,
                                 const RobotModel& model) {
  if (!(s >= 0.0 && s <= 1.0)) throw std::invalid_argument("interpolation parameter outside [0, 1]");
  detail::check_same_dof(a, b, model);
  if (s == 0.0) return a;
  if (s == 1.0) return b;
  Configuration c = a;
  for (std::size_t i = 0; i < a.dof; ++i) {
    if (is_angular(model, i)) {
      c.values[i] = wrap_angle(a[i] + s * wrap_angle(b[i] - a[i]));
    } else {
      c.values[i] = a[i] + s * (b[i] - a[i]);
    }
  }
  return c;
}

/// Default validation resolution: half the footprint half-width.
inline double validation_step(const RobotModel& model) { return model.footprint() / 2.0; }

/// Upper bound on how far any point of the body moves when the
/// configuration moves by `metric_distance`.
inline double displacement_bound(const RobotModel& model, double metric_distance) {
  if (model.is_disc()) return metric_distance;
  return std::sqrt(static_cast<double>(model.dof())) * metric_distance;
}

/// Resolution of robot-robot checks inside one timestep and whether the
/// sampled checks are inflated so that they certify the continuous motion.
struct CheckSettings {
  int sub_steps = 4;
  bool conservative = true;
  /// Optional upper bound on per-interval motion; 0 keeps validation_step.
  double step_cap = 0.0;

  static CheckSettings exact(int sub_steps = 1) { return {sub_steps, false, 0.0}; }
};

/// Per-interval motion bound used to discretize and validate edges.
inline double effective_step(const RobotModel& model, const CheckSettings& checks) {
  const double s = validation_step(model);
  return checks.step_cap > 0.0 ? std::min(s, checks.step_cap) : s;
}

/// Clearance added to environment checks at configurations spaced at most
/// one validation step apart.
inline double env_margin(const RobotModel& model, const CheckSettings& checks) {
  if (!checks.conservative) return 0.0;
  return displacement_bound(model, validation_step(model)) / 2.0;
}

/// Clearance added to robot-robot checks sampled `sub_steps` times per step.
inline double pair_margin(const RobotModel& a, const RobotModel& b, const CheckSettings& checks) {
  if (!checks.conservative) return 0.0;
  const double da = displacement_bound(a, validation_step(a));
  const double db = displacement_bound(b, validation_step(b));
  return (da + db) / (2.0 * std::max(1, checks.sub_steps));
}

struct PlacedRobot {
  const RobotModel* model = nullptr;
  Configuration config;
};

inline bool config_valid(const Configuration& c, const RobotModel& model, const Environment& env,
                         double margin = 0.0) {
  return !robot_env_collides(model, c.view(), env, margin);
}

/// Checks configurations at arc spacing <= step, endpoints included,
/// against the environment and every static robot in `others`.
inline bool edge_valid(const Configuration& a, const Configuration& b, const RobotModel& model,
                       const Environment& env, std::span<const PlacedRobot> others, double step,
                       double margin = 0.0) {
  if (!(step > 0.0)) throw std::invalid_argument("edge validation step must be positive");
  const double d = distance(a, b, model);
  const int n = std::max(1, static_cast<int>(std::ceil(d / step)));
  std::vector<Body> other_bodies;
  other_bodies.reserve(others.size());
  for (const auto& o : others) other_bodies.push_back(body_at(*o.model, o.config.view()));
  for (int i = 0; i <= n; ++i) {
    const Configuration c = interpolate(a, b, static_cast<double>(i) / n, model);
    const Body body = body_at(model, c.view());
    if (body_env_collides(body, env, margin)) return false;
    for (const auto& ob : other_bodies) {
      if (bodies_collide(body, ob, margin)) return false;
    }
  }
  return true;
}

// ---- composite space -------------------------------------------------------

namespace detail {

inline void check_group(const CompositeConfiguration& a, const CompositeConfiguration& b,
                        std::span<const RobotModel> models) {
  if (a.size() != b.size() || a.size() != models.size()) {
    throw std::invalid_argument("composite configuration group mismatch");
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].robot_index != b[i].robot_index) {
      throw std::invalid_argument("composite configurations refer to different robots");
    }
  }
}

}  // namespace detail

inline double composite_distance(const CompositeConfiguration& a, const CompositeConfiguration& b,
                                 std::span<const RobotModel> models) {
  detail::check_group(a, b, models);
  double sum = 0.0;
  for (std::size_t r = 0; r < a.size(); ++r) {
    const double d = distance(a[r], b[r], models[r]);
    sum += d * d;
  }
  return std::sqrt(sum);
}

inline CompositeConfiguration composite_interpolate(const CompositeConfiguration& a,
                                                    const CompositeConfiguration& b, double s,
                                                    std::span<const RobotModel> models) {
  detail::check_group(a, b, models);
  CompositeConfiguration out;
  out.reserve(a.size());
  for (std::size_t r = 0; r < a.size(); ++r) out.push_back(interpolate(a[r], b[r], s, models[r]));
  return out;
}

/// Number of uniform intervals so that no robot moves more than its
/// validation step per interval (at least one).
inline int composite_steps(const CompositeConfiguration& a, const CompositeConfiguration& b,
                           std::span<const RobotModel> models, double step_cap = 0.0) {
  detail::check_group(a, b, models);
  int n = 1;
  for (std::size_t r = 0; r < a.size(); ++r) {
    double step = validation_step(models[r]);
    if (step_cap > 0.0) step = std::min(step, step_cap);
    const double d = distance(a[r], b[r], models[r]);
    n = std::max(n, static_cast<int>(std::ceil(d / step - 1e-12)));
  }
  return n;
}

inline bool composite_config_valid(const CompositeConfiguration& c, std::span<const RobotModel> models,
                                   const Environment& env, const CheckSettings& checks = CheckSettings::exact()) {
  std::vector<Body> bodies;
  bodies.reserve(c.size());
  for (std::size_t r = 0; r < c.size(); ++r) {
    bodies.push_back(body_at(models[r], c[r].view()));
    if (body_env_collides(bodies.back(), env, env_margin(models[r], checks))) return false;
  }
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (std::size_t j = i + 1; j < c.size(); ++j) {
      if (bodies_collide(bodies[i], bodies[j], pair_margin(models[i], models[j], checks))) return false;
    }
  }
  return true;
}

/// Per-robot environment checks at every interval endpoint plus intra-group
/// robot-robot checks at `sub_steps` points per interval.
inline bool composite_edge_valid(const CompositeConfiguration& a, const CompositeConfiguration& b,
                                 std::span<const RobotModel> models, const Environment& env,
                                 const CheckSettings& checks = CheckSettings::exact()) {
  const int n = composite_steps(a, b, models, checks.step_cap);
  const int ss = std::max(1, checks.sub_steps);
  const std::size_t m = a.size();
  std::vector<double> env_m(m);
  for (std::size_t r = 0; r < m; ++r) env_m[r] = env_margin(models[r], checks);
  std::vector<Body> bodies(m);
  for (int i = 0; i <= n * ss; ++i) {
    const double s = static_cast<double>(i) / (n * ss);
    const bool env_point = i % ss == 0;
    for (std::size_t r = 0; r < m; ++r) {
      bodies[r] = body_at(models[r], interpolate(a[r], b[r], s, models[r]).view());
      if (env_point && body_env_collides(bodies[r], env, env_m[r])) return false;
    }
    for (std::size_t p = 0; p < m; ++p) {
      for (std::size_t q = p + 1; q < m; ++q) {
        if (bodies_collide(bodies[p], bodies[q], pair_margin(models[p], models[q], checks))) return false;
      }
    }
  }
  return true;
}

}  // namespace earc
