#pragma once

// Experience database of small-group subproblem solutions: classification
// keys, anchored entries, offline construction, and the retrieve / validate /
// repair / connect pipeline used to resolve conflicts.

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "earc/cspace.hpp"
#include "earc/deadline.hpp"
#include "earc/local_solvers.hpp"
#include "earc/paths.hpp"
#include "earc/random.hpp"
#include "earc/roadmap.hpp"
#include "earc/subproblem.hpp"

namespace earc {

/// Base-position quantum for manipulator pair keys (meters).
inline constexpr double kBaseGrid = 0.1;
/// Heading quantum for manipulator pair keys (5 degrees).
inline constexpr double kHeadingGrid = 5.0 * kPi / 180.0;
inline constexpr int kHeadingSlots = 72;

/// Bucket identifier: group size for mobile robots, quantized relative base
/// transform for manipulator pairs, robot count for full-problem entries.
struct TransformKey {
  enum class Kind : int { mobile = 0, manipulator_pair = 1, full_problem = 2 };

  Kind kind = Kind::mobile;
  int robots = 2;
  /// Manipulator pairs: second base in the first base's frame, in grid units
  /// (dx, dy, dheading).
  std::array<int, 3> rel{};

  static TransformKey mobile(int m) {
    if (m < 2 || m > 4) throw std::invalid_argument("mobile keys cover groups of 2 to 4 robots");
    return {Kind::mobile, m, {}};
  }
  static TransformKey manipulator_pair(std::array<int, 3> rel) { return {Kind::manipulator_pair, 2, rel}; }
  static TransformKey full_problem(int n) { return {Kind::full_problem, n, {}}; }

  std::string label() const {
    switch (kind) {
      case Kind::mobile:
        return "mobile-" + std::to_string(robots);
      case Kind::manipulator_pair:
        return "manipulator(" + std::to_string(rel[0]) + "," + std::to_string(rel[1]) + "," +
               std::to_string(rel[2]) + ")";
      case Kind::full_problem:
        return "full-" + std::to_string(robots);
    }
    return "?";
  }

  auto operator<=>(const TransformKey&) const = default;
};

/// A key plus whether the subproblem lists the pair in the opposite order
/// to the canonical (lexicographically smaller base first) one.
struct KeyMatch {
  TransformKey key;
  bool inverted = false;
};

inline int quantize_heading(double h) {
  int q = static_cast<int>(std::lround(wrap_angle(h) / kHeadingGrid));
  q %= kHeadingSlots;
  if (q < -kHeadingSlots / 2) q += kHeadingSlots;
  if (q >= kHeadingSlots / 2) q -= kHeadingSlots;
  return q;
}

inline KeyMatch classify_pair(const Pose2& a, const Pose2& b) {
  auto quantized = [](const Pose2& p) {
    return std::tuple{std::lround(p.position.x / kBaseGrid), std::lround(p.position.y / kBaseGrid),
                      quantize_heading(p.heading)};
  };
  const bool a_first = !(quantized(b) < quantized(a));
  const Pose2& first = a_first ? a : b;
  const Pose2& second = a_first ? b : a;
  const Vec2 d = (second.position - first.position).rotated(-first.heading);
  const std::array<int, 3> rel{static_cast<int>(std::lround(d.x / kBaseGrid)),
                               static_cast<int>(std::lround(d.y / kBaseGrid)),
                               quantize_heading(second.heading - first.heading)};
  return {TransformKey::manipulator_pair(rel), !a_first};
}

/// Key of a subproblem group, or nullopt when no bucket kind applies.
inline std::optional<KeyMatch> classify(std::span<const RobotModel> models) {
  if (models.empty()) return std::nullopt;
  const bool discs = std::all_of(models.begin(), models.end(), [](const auto& m) { return m.is_disc(); });
  const bool arms = std::all_of(models.begin(), models.end(), [](const auto& m) { return m.is_arm(); });
  if (discs && models.size() >= 2 && models.size() <= 4) {
    return KeyMatch{TransformKey::mobile(static_cast<int>(models.size())), false};
  }
  if (arms && models.size() == 2) return classify_pair(models[0].base, models[1].base);
  return std::nullopt;
}

/// A stored solution. Queries and paths are listed by slot (robot_index =
/// slot). Mobile entries are stored relative to `anchor`; manipulator
/// entries are joint-space values in canonical pair order; full-problem
/// entries are absolute.
struct ExperienceEntry {
  TransformKey key;
  Vec2 anchor;
  std::vector<Query> queries;
  std::vector<TimedPath> paths;
  std::uint64_t id = 0;
};

struct Database {
  static constexpr int kFormatVersion = 1;

  /// One prototype robot for subproblem databases; every robot of the
  /// problem class for full-problem databases.
  std::vector<RobotModel> robots;
  /// Novelty threshold under the retrieval distance.
  double delta = 0.0;
  double build_seconds = 0.0;
  std::uint64_t next_id = 0;
  std::map<TransformKey, std::vector<ExperienceEntry>> buckets;

  std::size_t size() const {
    std::size_t n = 0;
    for (const auto& [k, b] : buckets) n += b.size();
    return n;
  }

  const std::vector<ExperienceEntry>* bucket(const TransformKey& key) const {
    const auto it = buckets.find(key);
    return it == buckets.end() ? nullptr : &it->second;
  }

  /// Slot models of a bucket (arm bases rebuilt from the key).
  std::vector<RobotModel> slot_models(const TransformKey& key, Vec2 anchor = {}) const {
    if (robots.empty()) throw std::invalid_argument("database has no robot description");
    switch (key.kind) {
      case TransformKey::Kind::mobile:
        return std::vector<RobotModel>(static_cast<std::size_t>(key.robots), robots.front());
      case TransformKey::Kind::manipulator_pair: {
        RobotModel a = robots.front(), b = robots.front();
        a.base = Pose2(anchor, 0.0);
        b.base = Pose2(anchor + Vec2{key.rel[0] * kBaseGrid, key.rel[1] * kBaseGrid}, key.rel[2] * kHeadingGrid);
        return {a, b};
      }
      case TransformKey::Kind::full_problem:
        if (robots.size() != static_cast<std::size_t>(key.robots)) {
          return std::vector<RobotModel>(static_cast<std::size_t>(key.robots), robots.front());
        }
        return robots;
    }
    return {};
  }
};

struct RetrievalParams {
  int k = 10;
  /// Candidates with at least this many invalid segments are not repaired.
  int max_collisions = 3;

  void validate() const {
    if (k < 1 || max_collisions < 0) throw std::invalid_argument("invalid retrieval parameters");
  }
};

// ---- anchoring and distances ----------------------------------------------

namespace detail {

inline Vec2 position_of(const Configuration& c) { return {c[0], c[1]}; }

inline Configuration shifted(Configuration c, Vec2 offset) {
  c[0] += offset.x;
  c[1] += offset.y;
  return c;
}

inline Vec2 query_centroid(std::span<const Query> queries) {
  Vec2 sum;
  for (const auto& q : queries) sum = sum + position_of(q.start) + position_of(q.goal);
  return (1.0 / (2.0 * static_cast<double>(queries.size()))) * sum;
}

inline double tuple_distance(std::span<const Query> a, std::span<const Query> b, std::span<const RobotModel> models) {
  double d = 0.0;
  for (std::size_t r = 0; r < a.size(); ++r) {
    d += distance(a[r].start, b[r].start, models[r]) + distance(a[r].goal, b[r].goal, models[r]);
  }
  return d;
}

/// Order in which subproblem robots map onto canonical entry slots.
inline std::vector<std::size_t> slot_order(std::size_t n, bool inverted) {
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = inverted ? n - 1 - i : i;
  return order;
}

}  // namespace detail

/// Subproblem queries expressed the way entries of `match.key` are stored.
inline std::vector<Query> anchored_queries(const Subproblem& sub, const KeyMatch& match) {
  std::vector<Query> out;
  const auto order = detail::slot_order(sub.size(), match.inverted);
  const Vec2 anchor =
      match.key.kind == TransformKey::Kind::mobile ? detail::query_centroid(sub.queries) : Vec2{};
  for (std::size_t slot = 0; slot < sub.size(); ++slot) {
    Query q = sub.queries[order[slot]];
    if (match.key.kind == TransformKey::Kind::mobile) {
      q.start = detail::shifted(q.start, Vec2{} - anchor);
      q.goal = detail::shifted(q.goal, Vec2{} - anchor);
    }
    q.start.robot_index = static_cast<int>(slot);
    q.goal.robot_index = static_cast<int>(slot);
    out.push_back(q);
  }
  return out;
}

/// Anchored entry for a solved subproblem whose robots are listed in
/// canonical order.
inline ExperienceEntry make_entry(const TransformKey& key, const Subproblem& sub, const LocalPaths& paths) {
  ExperienceEntry e;
  e.key = key;
  if (key.kind == TransformKey::Kind::mobile) {
    e.anchor = detail::query_centroid(sub.queries);
  } else if (key.kind == TransformKey::Kind::manipulator_pair) {
    e.anchor = sub.models.front().base.position;
  }
  const Vec2 back = Vec2{} - e.anchor;
  const bool shift = key.kind == TransformKey::Kind::mobile;
  for (std::size_t slot = 0; slot < sub.size(); ++slot) {
    Query q = sub.queries[slot];
    TimedPath p = paths[slot];
    if (shift) {
      q.start = detail::shifted(q.start, back);
      q.goal = detail::shifted(q.goal, back);
      for (auto& c : p.configs) c = detail::shifted(c, back);
    }
    const int s = static_cast<int>(slot);
    q.start.robot_index = q.goal.robot_index = s;
    p.robot_index = s;
    for (auto& c : p.configs) c.robot_index = s;
    e.queries.push_back(q);
    e.paths.push_back(std::move(p));
  }
  return e;
}

/// Retrieval distance between two entries of one bucket.
inline double entry_distance(const Database& db, const ExperienceEntry& a, const ExperienceEntry& b) {
  const auto models = db.slot_models(a.key);
  return detail::tuple_distance(a.queries, b.queries, models);
}

/// Stores `entry` unless a same-bucket entry's query tuple lies within delta.
inline bool insert_if_novel(Database& db, ExperienceEntry entry, double delta) {
  auto& bucket = db.buckets[entry.key];
  for (const auto& e : bucket) {
    if (entry_distance(db, e, entry) < delta) return false;
  }
  entry.id = db.next_id++;
  bucket.push_back(std::move(entry));
  return true;
}

inline bool insert_if_novel(Database& db, ExperienceEntry entry) {
  const double delta = db.delta;
  return insert_if_novel(db, std::move(entry), delta);
}

// ---- construction -----------------------------------------------------------

/// Knobs for generating isolated random subproblems.
struct GenerationParams {
  /// Mobile box side = box_scale * group size * robot diameter.
  double box_scale = 3.0;
  /// Manipulator goals differ from starts by at most this much per joint.
  double joint_spread = 1.0;
  int max_attempts = 10000;
};

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Random isolated subproblem for `key`: mobile groups in a reduced box with
/// short queries; manipulator pairs at the key's base transform.
inline Subproblem generate_random_subproblem(const TransformKey& key, const RobotModel& prototype, Rng& rng,
                                             const CheckSettings& checks = {}, const GenerationParams& gen = {}) {
  Subproblem sub;
  const int m = key.robots;
  if (key.kind == TransformKey::Kind::mobile) {
    if (!prototype.is_disc()) throw std::invalid_argument("mobile keys need a disc prototype");
    const double side = gen.box_scale * m * 2.0 * prototype.radius;
    sub.env.boundary = Rect{{-side / 2, -side / 2}, {side / 2, side / 2}};
    sub.models.assign(static_cast<std::size_t>(m), prototype);
  } else if (key.kind == TransformKey::Kind::manipulator_pair) {
    if (!prototype.is_arm()) throw std::invalid_argument("manipulator keys need an arm prototype");
    Database tmp;
    tmp.robots = {prototype};
    sub.models = tmp.slot_models(key);
    const double reach = prototype.reach() + 2.0 * prototype.link_thickness;
    Rect box{sub.models[0].base.position, sub.models[0].base.position};
    box = box.hull(Rect{sub.models[1].base.position, sub.models[1].base.position});
    sub.env.boundary = box.inflated(reach * 1.1);
  } else {
    throw std::invalid_argument("full-problem keys are generated from scenarios");
  }
  for (int r = 0; r < m; ++r) {
    sub.robots.push_back(r);
    sub.region.push_back(full_box(sub.models[static_cast<std::size_t>(r)], sub.env.boundary));
  }
  const Space space{sub.models, sub.robots, sub.region, sub.env, checks};
  const double side = sub.env.boundary.width();

  auto draw_starts = [&] {
    CompositeConfiguration c;
    for (int r = 0; r < m; ++r) c.push_back(sample(sub.models[static_cast<std::size_t>(r)], sub.region[static_cast<std::size_t>(r)], rng, r));
    return c;
  };
  auto draw_goal_near = [&](const Configuration& s, std::size_t r) {
    const RobotModel& model = sub.models[r];
    Configuration g = s;
    if (model.is_disc()) {
      const double radius = side / 2.0 * std::sqrt(rng.unit());
      const double ang = rng.uniform(-kPi, kPi);
      g[0] = s[0] + radius * std::cos(ang);
      g[1] = s[1] + radius * std::sin(ang);
      g[2] = rng.uniform(-kPi, kPi);
    } else {
      for (std::size_t i = 0; i < g.dof; ++i) g[i] = wrap_angle(s[i] + rng.uniform(-gen.joint_spread, gen.joint_spread));
    }
    return g;
  };

  for (int attempt = 0; attempt < gen.max_attempts; ++attempt) {
    const CompositeConfiguration starts = draw_starts();
    if (!space.valid(starts)) continue;
    CompositeConfiguration goals;
    for (std::size_t r = 0; r < starts.size(); ++r) goals.push_back(draw_goal_near(starts[r], r));
    if (!space.valid(goals)) continue;
    for (std::size_t r = 0; r < starts.size(); ++r) sub.queries.push_back({starts[r], goals[r]});
    sub.t_lo = 0;
    sub.t_hi = 1;
    return sub;
  }
  throw GenerationError("could not generate a valid " + key.label() + " subproblem");
}

struct DatabaseBuildParams {
  std::map<TransformKey, int> counts;
  PrmParams prm = PrmParams::subproblem_defaults();
  CheckSettings checks;
  GenerationParams generation;
  /// Novelty threshold; 0 picks the default for the prototype.
  double delta = 0.0;
  std::uint64_t seed = 1;
};

/// Default novelty threshold: half a footprint (mobile) or 0.2 rad of joint
/// norm in metric units (manipulator).
inline double default_delta(const RobotModel& prototype) {
  return prototype.is_disc() ? 0.5 * prototype.radius : 0.2 * prototype.reach();
}

/// Solves random isolated subproblems with the coupled solver and keeps the
/// novel ones until each bucket holds its requested count (or 20x attempts).
inline Database build_database(const RobotModel& prototype, const DatabaseBuildParams& params,
                               const Deadline& deadline = Deadline::never()) {
  const Stopwatch watch;
  Database db;
  db.robots = {prototype};
  db.delta = params.delta > 0.0 ? params.delta : default_delta(prototype);
  for (const auto& [key, count] : params.counts) {
    if (count <= 0) continue;
    int stored = 0;
    const int budget = 20 * count;
    for (int attempt = 0; attempt < budget && stored < count; ++attempt) {
      deadline.check();
      const std::uint64_t seed = derive_seed(params.seed, {static_cast<std::uint64_t>(key.kind),
                                                           static_cast<std::uint64_t>(key.robots),
                                                           static_cast<std::uint64_t>(key.rel[0] + 1000),
                                                           static_cast<std::uint64_t>(key.rel[1] + 1000),
                                                           static_cast<std::uint64_t>(key.rel[2] + 1000),
                                                           static_cast<std::uint64_t>(attempt)});
      Rng rng(seed);
      Subproblem sub;
      try {
        sub = generate_random_subproblem(key, prototype, rng, params.checks, params.generation);
      } catch (const GenerationError&) {
        continue;
      }
      PrmParams prm = params.prm;
      prm.seed = mix_seed(seed);
      const auto solution = coupled_prm_solve(sub, prm, params.checks, deadline);
      if (!solution) continue;
      if (insert_if_novel(db, make_entry(key, sub, *solution), db.delta)) ++stored;
    }
    if (2 * stored < count) {
      throw ConstructionError("database bucket " + key.label() + " stored " + std::to_string(stored) + " of " +
                              std::to_string(count) + " requested entries");
    }
  }
  db.build_seconds = watch.seconds();
  return db;
}

// ---- retrieval --------------------------------------------------------------

struct Candidate {
  const ExperienceEntry* entry = nullptr;
  double distance = 0.0;
};

/// Exact k nearest entries of the subproblem's bucket, ascending distance,
/// ties by entry id.
inline std::vector<Candidate> k_closest(const Database& db, const Subproblem& sub, int k,
                                        const std::optional<KeyMatch>& key_override = std::nullopt) {
  const auto match = key_override ? key_override : classify(sub.models);
  if (!match) return {};
  const auto* bucket = db.bucket(match->key);
  if (!bucket || bucket->empty()) return {};
  const auto models = db.slot_models(match->key);
  const auto queries = anchored_queries(sub, *match);
  std::vector<Candidate> all;
  all.reserve(bucket->size());
  for (const auto& e : *bucket) all.push_back({&e, detail::tuple_distance(queries, e.queries, models)});
  const std::size_t take = std::min(all.size(), static_cast<std::size_t>(std::max(0, k)));
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(take), all.end(),
                    [](const Candidate& a, const Candidate& b) {
                      return a.distance < b.distance || (a.distance == b.distance && a.entry->id < b.entry->id);
                    });
  all.resize(take);
  return all;
}

/// An entry mapped into a subproblem's frame and robot order.
struct TransformedCandidate {
  const ExperienceEntry* entry = nullptr;
  std::vector<Query> queries;
  LocalPaths paths;
};

/// Mobile: translate by the subproblem anchor. Manipulator: joint space is
/// kept; inverted matches swap which robot receives which stored path.
inline TransformedCandidate transform_entry(const ExperienceEntry& entry, const Subproblem& sub,
                                            const std::optional<KeyMatch>& key_override = std::nullopt) {
  const auto match = key_override ? key_override : classify(sub.models);
  if (!match || !(match->key == entry.key)) throw std::invalid_argument("entry key does not match subproblem");
  const auto order = detail::slot_order(sub.size(), match->inverted);
  const Vec2 offset = match->key.kind == TransformKey::Kind::mobile ? detail::query_centroid(sub.queries) : Vec2{};
  const bool shift = match->key.kind == TransformKey::Kind::mobile;
  TransformedCandidate out;
  out.entry = &entry;
  out.queries.resize(sub.size());
  out.paths.resize(sub.size());
  for (std::size_t slot = 0; slot < sub.size(); ++slot) {
    const std::size_t k = order[slot];
    const int robot = sub.robots[k];
    Query q = entry.queries[slot];
    TimedPath p = entry.paths[slot];
    if (shift) {
      q.start = detail::shifted(q.start, offset);
      q.goal = detail::shifted(q.goal, offset);
      for (auto& c : p.configs) c = detail::shifted(c, offset);
    }
    q.start.robot_index = q.goal.robot_index = robot;
    p.robot_index = robot;
    for (auto& c : p.configs) c.robot_index = robot;
    out.queries[k] = q;
    out.paths[k] = std::move(p);
  }
  return out;
}

namespace detail {

inline CompositeConfiguration composite_at(const LocalPaths& paths, int t) {
  CompositeConfiguration c;
  c.reserve(paths.size());
  for (const auto& p : paths) c.push_back(p.at(t));
  return c;
}

}  // namespace detail

/// Per-segment validity flags (segment t joins timesteps t and t + 1).
inline std::vector<bool> invalid_segments(const LocalPaths& paths, std::span<const RobotModel> models,
                                          const Environment& env, const CheckSettings& checks) {
  const int T = common_horizon(paths);
  std::vector<bool> bad(static_cast<std::size_t>(std::max(0, T)), false);
  for (int t = 0; t < T; ++t) {
    bad[static_cast<std::size_t>(t)] = !composite_edge_valid(detail::composite_at(paths, t),
                                                             detail::composite_at(paths, t + 1), models, env, checks);
  }
  return bad;
}

struct ValidatedCandidate {
  std::size_t index = 0;
  int invalid_count = 0;
  std::vector<bool> invalid;
};

/// Discards candidates whose endpoints cannot be joined to the subproblem
/// queries by straight composite edges, then picks the one with the fewest
/// invalid segments (ties to the better retrieval rank).
inline std::optional<ValidatedCandidate> validate_candidates(std::span<const TransformedCandidate> cands,
                                                             const Subproblem& sub, const Environment& env,
                                                             const CheckSettings& checks = {}) {
  std::optional<ValidatedCandidate> best;
  const auto starts = sub.starts();
  const auto goals = sub.goals();
  for (std::size_t i = 0; i < cands.size(); ++i) {
    const auto& c = cands[i];
    const int T = common_horizon(c.paths);
    if (!composite_edge_valid(starts, detail::composite_at(c.paths, 0), sub.models, env, checks)) continue;
    if (!composite_edge_valid(detail::composite_at(c.paths, T), goals, sub.models, env, checks)) continue;
    auto bad = invalid_segments(c.paths, sub.models, env, checks);
    const int count = static_cast<int>(std::count(bad.begin(), bad.end(), true));
    if (!best || count < best->invalid_count) best = ValidatedCandidate{i, count, std::move(bad)};
    if (best && best->invalid_count == 0) break;
  }
  return best;
}

/// Replaces every maximal run of invalid segments with a coupled solve in a
/// box around the run. nullopt if any run cannot be repaired.
inline std::optional<LocalPaths> repair_path(const LocalPaths& candidate, const std::vector<bool>& invalid,
                                             const Subproblem& sub, const Environment& env, const PrmParams& prm,
                                             const CheckSettings& checks = {}, const Deadline& deadline = Deadline::never()) {
  LocalPaths paths = candidate;
  pad_all(paths);
  std::vector<std::pair<int, int>> runs;
  for (int t = 0; t < static_cast<int>(invalid.size());) {
    if (!invalid[static_cast<std::size_t>(t)]) {
      ++t;
      continue;
    }
    int e = t;
    while (e < static_cast<int>(invalid.size()) && invalid[static_cast<std::size_t>(e)]) ++e;
    runs.emplace_back(t, e);
    t = e;
  }
  double footprint = 0.0;
  for (const auto& m : sub.models) footprint = std::max(footprint, m.footprint());
  const double inflation = sub.inflation > 0.0 ? sub.inflation : 2.0 * footprint;

  for (auto it = runs.rbegin(); it != runs.rend(); ++it) {
    const auto [a, b] = *it;
    Subproblem rep;
    rep.robots = sub.robots;
    rep.models = sub.models;
    rep.inflation = inflation;
    bool any_disc = false;
    Rect box;
    bool have = false;
    for (std::size_t r = 0; r < paths.size(); ++r) {
      rep.queries.push_back({paths[r].at(a), paths[r].at(b)});
      if (!sub.models[r].is_disc()) continue;
      any_disc = true;
      for (int t = a; t <= b; ++t) {
        const Rect bb = body_at(sub.models[r], paths[r].at(t).view()).bounds;
        box = have ? box.hull(bb) : bb;
        have = true;
      }
    }
    rep.env = any_disc ? env.clipped(box.inflated(inflation).intersection(env.boundary)) : env;
    for (const auto& m : rep.models) rep.region.push_back(full_box(m, rep.env.boundary));
    PrmParams p = prm;
    p.seed = derive_seed(prm.seed, {static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b)});
    const auto fixed = coupled_prm_solve(rep, p, checks, deadline);
    if (!fixed) return std::nullopt;
    for (std::size_t r = 0; r < paths.size(); ++r) paths[r] = splice(paths[r], (*fixed)[r], a, b);
  }
  return paths;
}

/// Straight stubs from the subproblem starts to the candidate and from the
/// candidate to the subproblem goals, all on the shared clock.
inline LocalPaths connect_path(const LocalPaths& candidate, const Subproblem& sub, const CheckSettings& checks = {}) {
  LocalPaths paths = candidate;
  pad_all(paths);
  const int T = common_horizon(paths);
  const std::vector<CompositeConfiguration> in{sub.starts(), detail::composite_at(paths, 0)};
  const std::vector<CompositeConfiguration> out{detail::composite_at(paths, T), sub.goals()};
  LocalPaths result = discretize_composite(in, sub.models, checks.step_cap);
  const LocalPaths tail = discretize_composite(out, sub.models, checks.step_cap);
  for (std::size_t r = 0; r < result.size(); ++r) {
    result[r].configs.insert(result[r].configs.end(), paths[r].configs.begin() + 1, paths[r].configs.end());
    result[r].configs.insert(result[r].configs.end(), tail[r].configs.begin() + 1, tail[r].configs.end());
    for (auto& c : result[r].configs) c.robot_index = sub.robots[r];
    result[r].robot_index = sub.robots[r];
  }
  return result;
}

struct DatabaseResult {
  LocalPaths paths;
  std::uint64_t entry_id = 0;
  int invalid_segments = 0;
  bool repaired = false;
};

namespace detail {

/// Copy of `sub` with its robots listed in reverse order.
inline Subproblem reversed(const Subproblem& sub) {
  Subproblem out = sub;
  std::reverse(out.robots.begin(), out.robots.end());
  std::reverse(out.models.begin(), out.models.end());
  std::reverse(out.queries.begin(), out.queries.end());
  std::reverse(out.region.begin(), out.region.end());
  return out;
}

inline std::optional<DatabaseResult> database_planning_canonical(const Database& db, const Subproblem& sub,
                                                                 const KeyMatch& match, const Environment& env,
                                                                 const RetrievalParams& retrieval,
                                                                 const PrmParams& prm, const CheckSettings& checks,
                                                                 const Deadline& deadline) {
  const auto closest = k_closest(db, sub, retrieval.k, match);
  if (closest.empty()) return std::nullopt;
  std::vector<TransformedCandidate> cands;
  cands.reserve(closest.size());
  for (const auto& c : closest) cands.push_back(transform_entry(*c.entry, sub, match));
  deadline.check();
  const auto best = validate_candidates(cands, sub, env, checks);
  if (!best) return std::nullopt;
  const auto& chosen = cands[best->index];
  DatabaseResult result;
  result.entry_id = chosen.entry->id;
  result.invalid_segments = best->invalid_count;
  if (best->invalid_count == 0) {
    result.paths = connect_path(chosen.paths, sub, checks);
    return result;
  }
  if (best->invalid_count < retrieval.max_collisions) {
    const auto fixed = repair_path(chosen.paths, best->invalid, sub, env, prm, checks, deadline);
    if (!fixed) return std::nullopt;
    result.paths = connect_path(*fixed, sub, checks);
    result.repaired = true;
    return result;
  }
  return std::nullopt;
}

}  // namespace detail

/// Retrieve, validate, then connect (or repair and connect) the best stored
/// solution; nullopt when the database cannot resolve the subproblem.
/// Inverted manipulator matches are processed in canonical robot order so
/// that role-swapped queries yield exchanged copies of one solution.
inline std::optional<DatabaseResult> database_planning(const Database& db, const Subproblem& sub,
                                                       const Environment& env, const RetrievalParams& retrieval = {},
                                                       const PrmParams& prm = PrmParams::subproblem_defaults(),
                                                       const CheckSettings& checks = {},
                                                       const Deadline& deadline = Deadline::never()) {
  retrieval.validate();
  const auto match = classify(sub.models);
  if (!match) return std::nullopt;
  if (!match->inverted) return detail::database_planning_canonical(db, sub, *match, env, retrieval, prm, checks, deadline);
  const Subproblem canonical = detail::reversed(sub);
  auto result = detail::database_planning_canonical(db, canonical, KeyMatch{match->key, false}, env, retrieval, prm,
                                                    checks, deadline);
  if (result) std::reverse(result->paths.begin(), result->paths.end());
  return result;
}

}  // namespace earc
