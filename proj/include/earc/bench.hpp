#pragma once

// Benchmark scenarios (mobile discs, facing manipulator pairs), seeded trial
// execution, CSV metrics and SVG rendering.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "earc/experience.hpp"
#include "earc/io.hpp"
#include "earc/planners.hpp"
#include "earc/problem.hpp"

namespace earc {

enum class Method { earc, arc, lightning };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::earc:
      return "earc";
    case Method::arc:
      return "arc";
    case Method::lightning:
      return "lightning";
  }
  return "?";
}

inline Method parse_method(const std::string& s) {
  if (s == "earc" || s == "e-arc") return Method::earc;
  if (s == "arc") return Method::arc;
  if (s == "lightning") return Method::lightning;
  throw std::invalid_argument("unknown method '" + s + "'");
}

struct ScenarioSpec {
  enum class Kind { mobile, manipulator };

  Kind kind = Kind::mobile;
  /// Robots (mobile) or base pairs (manipulator).
  int count = 2;
  int obstacles = 0;
  double obstacle_min = 0.4;
  double obstacle_max = 1.2;
  std::uint64_t seed = 1;

  // Mobile layout.
  double radius = 0.5;
  double area_per_robot = 16.0;
  /// Extra gap kept between endpoint footprints and around obstacles.
  double clearance = 0.25;

  // Manipulator layout.
  int links = 5;
  double link_length = 0.3;
  double link_thickness = 0.05;
  double pair_gap = 1.5;
  double pair_spacing = 2.0;
  /// Query joints past the first stay within +-max_bend, keeping arms reaching out.
  double max_bend = 0.6;

  int robots() const { return kind == Kind::mobile ? count : 2 * count; }

  void validate() const {
    if (count <= 0 || obstacles < 0) throw std::invalid_argument("scenario counts must be positive");
    if (!(obstacle_min > 0.0) || obstacle_max < obstacle_min) throw std::invalid_argument("invalid obstacle sizes");
    if (!(max_bend > 0.0) || max_bend > kPi) throw std::invalid_argument("max_bend must lie in (0, pi]");
  }

  std::string label() const {
    std::ostringstream s;
    s << (kind == Kind::mobile ? "mobile" : "manipulator") << '-' << robots() << (obstacles > 0 ? "-obst" : "");
    return s.str();
  }
};

namespace detail {

inline Obstacle random_obstacle(Rng& rng, const Rect& area, double lo, double hi) {
  if (rng.unit() < 0.5) {
    const double r = rng.uniform(lo, hi) / 2.0;
    return Circle{{rng.uniform(area.min.x + r, area.max.x - r), rng.uniform(area.min.y + r, area.max.y - r)}, r};
  }
  const double w = rng.uniform(lo, hi), h = rng.uniform(lo, hi);
  const double x = rng.uniform(area.min.x, area.max.x - w), y = rng.uniform(area.min.y, area.max.y - h);
  return Rect{{x, y}, {x + w, y + h}};
}

inline bool endpoints_clear(const Configuration& c, const RobotModel& model, const std::vector<Query>& taken,
                            const std::vector<RobotModel>& models, bool use_goal, double gap) {
  for (std::size_t i = 0; i < taken.size(); ++i) {
    const Configuration& o = use_goal ? taken[i].goal : taken[i].start;
    if (robots_collide(model, c.view(), models[i], o.view(), gap)) return false;
  }
  return true;
}

}  // namespace detail

/// Random discs in a square whose area grows with the robot count; optional
/// circle / rectangle obstacles placed clear of every endpoint, redrawn until
/// each robot can reach its goal alone.
inline Problem gen_mobile_scenario(const ScenarioSpec& spec, const CheckSettings& checks = {}) {
  spec.validate();
  Rng rng(spec.seed);
  const int n = spec.count;
  const double side = std::max(4.0 * spec.radius * 2.0, std::sqrt(spec.area_per_robot * n));
  Problem p;
  p.env.boundary = Rect{{0.0, 0.0}, {side, side}};
  const RobotModel disc = RobotModel::disc(spec.radius);
  p.robots.assign(static_cast<std::size_t>(n), disc);
  const ConfigBox box = full_box(disc, p.env.boundary.inflated(-spec.clearance));

  std::vector<Query> queries;
  for (int r = 0; r < n; ++r) {
    Query q;
    bool placed = false;
    for (int attempt = 0; attempt < 10000 && !placed; ++attempt) {
      q.start = sample(disc, box, rng, r);
      placed = detail::endpoints_clear(q.start, disc, queries, p.robots, false, spec.clearance);
    }
    if (!placed) throw GenerationError("no room for start of robot " + std::to_string(r));
    placed = false;
    for (int attempt = 0; attempt < 10000 && !placed; ++attempt) {
      q.goal = sample(disc, box, rng, r);
      placed = detail::endpoints_clear(q.goal, disc, queries, p.robots, true, spec.clearance);
    }
    if (!placed) throw GenerationError("no room for goal of robot " + std::to_string(r));
    queries.push_back(q);
  }
  p.queries = queries;

  PlannerConfig solo;
  solo.checks = checks;
  bool solvable = spec.obstacles == 0;
  for (int layout = 0; layout < 100 && !solvable; ++layout) {
    p.env.obstacles.clear();
    for (int o = 0; o < spec.obstacles; ++o) {
      bool placed = false;
      for (int attempt = 0; attempt < 10000 && !placed; ++attempt) {
        const Obstacle ob = detail::random_obstacle(rng, p.env.boundary, spec.obstacle_min, spec.obstacle_max);
        const Environment probe{p.env.boundary, {ob}};
        placed = true;
        for (std::size_t r = 0; r < p.queries.size() && placed; ++r) {
          placed = !robot_env_collides(disc, p.queries[r].start.view(), probe, spec.clearance) &&
                   !robot_env_collides(disc, p.queries[r].goal.view(), probe, spec.clearance);
        }
        if (placed) p.env.obstacles.push_back(ob);
      }
      if (!placed) throw GenerationError("no room for obstacle " + std::to_string(o));
    }
    solvable = true;
    for (int r = 0; r < n && solvable; ++r) {
      Problem single{p.env, {disc}, {p.queries[static_cast<std::size_t>(r)]}};
      single.queries[0].start.robot_index = single.queries[0].goal.robot_index = 0;
      solo.seed = derive_seed(spec.seed, {static_cast<std::uint64_t>(layout), static_cast<std::uint64_t>(r)});
      solvable = individual_paths(single, solo).has_value();
    }
  }
  if (!solvable) throw GenerationError("no obstacle layout leaves every robot a path");
  p.validate(checks);
  return p;
}

/// Base poses of the manipulator layout: pair k has base A at
/// (0, k * spacing) facing +x and base B at (gap, k * spacing) facing -x.
inline std::vector<Pose2> manipulator_bases(const ScenarioSpec& spec) {
  std::vector<Pose2> bases;
  for (int k = 0; k < spec.count; ++k) {
    bases.emplace_back(0.0, k * spec.pair_spacing, 0.0);
    bases.emplace_back(spec.pair_gap, k * spec.pair_spacing, kPi);
  }
  return bases;
}

inline RobotModel manipulator_model(const ScenarioSpec& spec, Pose2 base = {}) {
  return RobotModel::planar_arm(base, std::vector<double>(static_cast<std::size_t>(spec.links), spec.link_length),
                                spec.link_thickness);
}

/// Keys of every base pair close enough to interact in this layout.
inline std::vector<TransformKey> manipulator_keys(const ScenarioSpec& spec) {
  const auto bases = manipulator_bases(spec);
  const double reach = spec.links * spec.link_length + spec.link_thickness;
  std::set<TransformKey> keys;
  for (std::size_t i = 0; i < bases.size(); ++i) {
    for (std::size_t j = i + 1; j < bases.size(); ++j) {
      if ((bases[i].position - bases[j].position).norm() < 2.0 * reach) {
        keys.insert(classify_pair(bases[i], bases[j]).key);
      }
    }
  }
  return {keys.begin(), keys.end()};
}

/// Facing arm pairs with random valid joint-space queries; each query is
/// reachable by its own robot in isolation.
inline Problem gen_manipulator_scenario(const ScenarioSpec& spec, const CheckSettings& checks = {}) {
  spec.validate();
  Rng rng(spec.seed);
  const auto bases = manipulator_bases(spec);
  Problem p;
  Rect box{bases.front().position, bases.front().position};
  for (const auto& b : bases) box = box.hull(Rect{b.position, b.position});
  const double reach = spec.links * spec.link_length + spec.link_thickness;
  p.env.boundary = box.inflated(reach + 0.5);
  for (const auto& b : bases) p.robots.push_back(manipulator_model(spec, b));

  for (int o = 0; o < spec.obstacles; ++o) {
    bool placed = false;
    for (int attempt = 0; attempt < 10000 && !placed; ++attempt) {
      const Obstacle ob = detail::random_obstacle(rng, p.env.boundary, spec.obstacle_min, spec.obstacle_max);
      const Rect bb = bounds_of(ob);
      placed = true;
      for (const auto& b : bases) {
        const Vec2 near{std::clamp(b.position.x, bb.min.x, bb.max.x), std::clamp(b.position.y, bb.min.y, bb.max.y)};
        if ((near - b.position).norm() < 2.0 * spec.link_length) placed = false;
      }
      if (placed) p.env.obstacles.push_back(ob);
    }
    if (!placed) throw GenerationError("no room for obstacle " + std::to_string(o));
  }

  PlannerConfig solo;
  solo.checks = checks;
  std::vector<Query> queries;
  for (std::size_t r = 0; r < p.robots.size(); ++r) {
    const RobotModel& m = p.robots[r];
    ConfigBox jb = full_box(m, p.env.boundary);
    for (std::size_t j = 1; j < jb.dof; ++j) {
      jb.lo[j] = -spec.max_bend;
      jb.hi[j] = spec.max_bend;
    }
    Environment keep_out{p.env.boundary, {}};
    for (std::size_t o = 0; o < bases.size(); ++o) {
      if (o != r) keep_out.obstacles.push_back(Circle{bases[o].position, spec.link_length});
    }
    bool placed = false;
    for (int attempt = 0; attempt < 2000 && !placed; ++attempt) {
      Query q{sample(m, jb, rng, static_cast<int>(r)), sample(m, jb, rng, static_cast<int>(r))};
      if (!config_valid(q.start, m, p.env, env_margin(m, checks)) ||
          !config_valid(q.goal, m, p.env, env_margin(m, checks)) ||
          robot_env_collides(m, q.start.view(), keep_out) || robot_env_collides(m, q.goal.view(), keep_out)) {
        continue;
      }
      if (!detail::endpoints_clear(q.start, m, queries, p.robots, false, spec.link_thickness) ||
          !detail::endpoints_clear(q.goal, m, queries, p.robots, true, spec.link_thickness)) {
        continue;
      }
      if (!p.env.obstacles.empty()) {
        Problem single{p.env, {m}, {q}};
        single.queries[0].start.robot_index = single.queries[0].goal.robot_index = 0;
        solo.seed = rng.next();
        if (!individual_paths(single, solo)) continue;
      }
      queries.push_back(q);
      placed = true;
    }
    if (!placed) throw GenerationError("no valid query for arm " + std::to_string(r));
  }
  p.queries = queries;
  p.validate(checks);
  return p;
}

inline Problem generate_scenario(const ScenarioSpec& spec, const CheckSettings& checks = {}) {
  return spec.kind == ScenarioSpec::Kind::mobile ? gen_mobile_scenario(spec, checks)
                                                 : gen_manipulator_scenario(spec, checks);
}

/// Subproblem database counts used by the benchmark: 2-, 3- and 4-robot
/// mobile keys, or every interacting pair key of a manipulator layout.
inline std::map<TransformKey, int> default_db_counts(const ScenarioSpec& spec, int per_key = 0) {
  std::map<TransformKey, int> counts;
  if (spec.kind == ScenarioSpec::Kind::mobile) {
    const int base = per_key > 0 ? per_key : 200;
    counts[TransformKey::mobile(2)] = base;
    counts[TransformKey::mobile(3)] = std::max(1, base / 2);
    counts[TransformKey::mobile(4)] = std::max(1, base / 4);
  } else {
    for (const auto& k : manipulator_keys(spec)) counts[k] = per_key > 0 ? per_key : 100;
  }
  return counts;
}

/// Prototype robot stored in the subproblem database of `spec`'s kind.
inline RobotModel prototype_robot(const ScenarioSpec& spec) {
  return spec.kind == ScenarioSpec::Kind::mobile ? RobotModel::disc(spec.radius) : manipulator_model(spec);
}

// ---- trials ----------------------------------------------------------------------

struct TrialRecord {
  Method method = Method::earc;
  std::string cell;
  int robots = 0;
  int obstacles = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  bool success = false;
  double planning_seconds = 0.0;
  double db_build_seconds = 0.0;
  int conflicts_resolved = 0;
  int db_hits = 0;
  int db_repairs = 0;
  int fallbacks = 0;
  std::string reason;
};

/// Databases available to a suite: one subproblem database per robot kind
/// and whole-problem databases keyed by robot count.
struct SuiteDatabases {
  const Database* mobile = nullptr;
  const Database* manipulator = nullptr;
  std::map<int, const Database*> full;
};

inline Solution run_method(Method method, const Problem& problem, const ScenarioSpec& spec, const SuiteDatabases& dbs,
                           const PlannerConfig& config) {
  switch (method) {
    case Method::earc:
      return earc_solve(problem, spec.kind == ScenarioSpec::Kind::mobile ? dbs.mobile : dbs.manipulator, config);
    case Method::arc:
      return arc_solve(problem, config);
    case Method::lightning: {
      const auto it = dbs.full.find(static_cast<int>(problem.size()));
      return lightning_solve(problem, it == dbs.full.end() ? nullptr : it->second, config);
    }
  }
  return {};
}

/// Runs every method on `trials` seeded instances of every cell. Records are
/// ordered by method, then cell, then trial.
inline std::vector<TrialRecord> run_suite(const std::vector<Method>& methods, const std::vector<ScenarioSpec>& cells,
                                          int trials, const PlannerConfig& config, const SuiteDatabases& dbs,
                                          std::uint64_t master_seed) {
  std::vector<TrialRecord> out;
  if (trials <= 0) return out;
  for (Method method : methods) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      for (int t = 0; t < trials; ++t) {
        ScenarioSpec spec = cells[c];
        spec.seed = derive_seed(master_seed, {static_cast<std::uint64_t>(c), static_cast<std::uint64_t>(t)});
        TrialRecord rec;
        rec.method = method;
        rec.cell = spec.label();
        rec.robots = spec.robots();
        rec.obstacles = spec.obstacles;
        rec.trial = t;
        rec.seed = spec.seed;
        if (method == Method::earc) {
          const Database* db = spec.kind == ScenarioSpec::Kind::mobile ? dbs.mobile : dbs.manipulator;
          rec.db_build_seconds = db ? db->build_seconds : 0.0;
        } else if (method == Method::lightning) {
          const auto it = dbs.full.find(spec.robots());
          rec.db_build_seconds = it == dbs.full.end() ? 0.0 : it->second->build_seconds;
        }
        try {
          const Problem problem = generate_scenario(spec, config.checks);
          PlannerConfig cfg = config;
          cfg.seed = derive_seed(spec.seed, {0x501eULL});
          const Solution sol = run_method(method, problem, spec, dbs, cfg);
          rec.success = sol.success && sol.planning_seconds <= config.timeout;
          rec.planning_seconds = sol.planning_seconds;
          rec.conflicts_resolved = sol.stats.conflicts_resolved;
          rec.db_hits = sol.stats.db_hits;
          rec.db_repairs = sol.stats.db_repairs;
          rec.fallbacks = sol.stats.fallbacks();
          rec.reason = sol.success ? (rec.success ? "" : "timeout") : sol.failure_reason;
        } catch (const std::exception& e) {
          rec.success = false;
          rec.reason = std::string("error: ") + e.what();
        }
        out.push_back(rec);
      }
    }
  }
  return out;
}

// ---- metrics -----------------------------------------------------------------

struct CellSummary {
  Method method = Method::earc;
  std::string cell;
  int robots = 0;
  int trials = 0;
  int successes = 0;
  double mean_seconds = 0.0;
  double median_seconds = 0.0;
  double db_build_seconds = 0.0;

  double success_rate() const { return trials == 0 ? 0.0 : static_cast<double>(successes) / trials; }
};

/// Per (method, cell) aggregates; times are over successful trials.
inline std::vector<CellSummary> summarize(const std::vector<TrialRecord>& records) {
  std::map<std::tuple<int, int, std::string>, std::vector<const TrialRecord*>> groups;
  std::vector<std::tuple<int, int, std::string>> order;
  for (const auto& r : records) {
    const auto key = std::tuple{static_cast<int>(r.method), r.robots, r.cell};
    if (!groups.count(key)) order.push_back(key);
    groups[key].push_back(&r);
  }
  std::sort(order.begin(), order.end());
  std::vector<CellSummary> out;
  for (const auto& key : order) {
    const auto& g = groups[key];
    CellSummary s;
    s.method = g.front()->method;
    s.cell = g.front()->cell;
    s.robots = g.front()->robots;
    s.trials = static_cast<int>(g.size());
    s.db_build_seconds = g.front()->db_build_seconds;
    std::vector<double> times;
    for (const auto* r : g) {
      if (!r->success) continue;
      ++s.successes;
      times.push_back(r->planning_seconds);
    }
    if (!times.empty()) {
      double sum = 0.0;
      for (double t : times) sum += t;
      s.mean_seconds = sum / static_cast<double>(times.size());
      std::sort(times.begin(), times.end());
      const std::size_t m = times.size() / 2;
      s.median_seconds = times.size() % 2 ? times[m] : 0.5 * (times[m - 1] + times[m]);
    }
    out.push_back(s);
  }
  return out;
}

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c == '\n' ? ' ' : c;
  }
  return q + "\"";
}

}  // namespace detail

/// trials.csv (one line per record) and summary.csv. Without timings the
/// files depend only on the master seed and configuration.
inline void write_metrics(const std::vector<TrialRecord>& records, std::ostream& trials_out, std::ostream& summary_out,
                          bool timings = true) {
  trials_out << "method,cell,robots,obstacles,trial,seed,success,planning_seconds,db_build_seconds,"
                "conflicts_resolved,db_hits,db_repairs,fallbacks,reason\n";
  for (const auto& r : records) {
    trials_out << to_string(r.method) << ',' << r.cell << ',' << r.robots << ',' << r.obstacles << ',' << r.trial
               << ',' << r.seed << ',' << (r.success ? 1 : 0) << ','
               << (timings ? format_number(r.planning_seconds) : "-") << ','
               << (timings ? format_number(r.db_build_seconds) : "-") << ',' << r.conflicts_resolved << ','
               << r.db_hits << ',' << r.db_repairs << ',' << r.fallbacks << ','
               << detail::csv_field(r.reason.rfind("timeout", 0) == 0 && !timings ? "" : r.reason) << '\n';
  }
  summary_out << "method,cell,robots,trials,successes,success_rate,mean_seconds,median_seconds,db_build_seconds\n";
  for (const auto& s : summarize(records)) {
    summary_out << to_string(s.method) << ',' << s.cell << ',' << s.robots << ',' << s.trials << ',' << s.successes
                << ',' << format_number(s.success_rate()) << ',' << (timings ? format_number(s.mean_seconds) : "-")
                << ',' << (timings ? format_number(s.median_seconds) : "-") << ','
                << (timings ? format_number(s.db_build_seconds) : "-") << '\n';
  }
}

inline void write_metrics(const std::vector<TrialRecord>& records, const std::string& directory, bool timings = true) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) throw IoError("cannot create '" + directory + "': " + ec.message());
  std::ofstream trials(std::filesystem::path(directory) / "trials.csv");
  std::ofstream summary(std::filesystem::path(directory) / "summary.csv");
  if (!trials || !summary) throw IoError("cannot write metrics into '" + directory + "'");
  write_metrics(records, trials, summary, timings);
  if (!trials || !summary) throw IoError("failed writing metrics into '" + directory + "'");
}

// ---- rendering ---------------------------------------------------------------

namespace detail {

inline const char* robot_colour(std::size_t i) {
  static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  return palette[i % 10];
}

inline Vec2 marker_point(const RobotModel& m, const Configuration& c) {
  if (m.is_disc()) return {c[0], c[1]};
  return fk_planar_arm(m, c.view()).back().b;
}

inline void svg_arm(std::ostream& out, const RobotModel& m, const Configuration& c, const char* colour, double w,
                    double opacity) {
  out << "<path class=\"pose\" d=\"";
  const auto segs = fk_planar_arm(m, c.view());
  out << "M " << format_number(segs.front().a.x) << ' ' << format_number(segs.front().a.y);
  for (const auto& s : segs) out << " L " << format_number(s.b.x) << ' ' << format_number(s.b.y);
  out << "\" fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"" << format_number(w)
      << "\" stroke-linecap=\"round\" opacity=\"" << opacity << "\"/>\n";
}

}  // namespace detail

/// Environment, obstacles, start (filled) and goal (hollow) markers and one
/// polyline per robot path; arms are traced by their end effector with key
/// poses at the start, middle and end.
inline void render_svg(const Problem& problem, const std::vector<TimedPath>& paths, std::ostream& out) {
  const Rect& b = problem.env.boundary;
  const double pad = 0.05 * std::max(b.width(), b.height());
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << format_number(b.min.x - pad) << ' '
      << format_number(-(b.max.y + pad)) << ' ' << format_number(b.width() + 2 * pad) << ' '
      << format_number(b.height() + 2 * pad) << "\" width=\"800\" height=\""
      << static_cast<int>(800.0 * (b.height() + 2 * pad) / (b.width() + 2 * pad)) << "\">\n";
  out << "<g transform=\"scale(1,-1)\">\n";
  out << "<rect x=\"" << format_number(b.min.x) << "\" y=\"" << format_number(b.min.y) << "\" width=\""
      << format_number(b.width()) << "\" height=\"" << format_number(b.height())
      << "\" fill=\"white\" stroke=\"black\" stroke-width=\"" << format_number(pad * 0.1) << "\"/>\n";
  for (const auto& o : problem.env.obstacles) {
    if (const auto* c = std::get_if<Circle>(&o)) {
      out << "<circle class=\"obstacle\" cx=\"" << format_number(c->center.x) << "\" cy=\""
          << format_number(c->center.y) << "\" r=\"" << format_number(c->radius) << "\" fill=\"#555\"/>\n";
    } else {
      const Rect& r = std::get<Rect>(o);
      out << "<rect class=\"obstacle\" x=\"" << format_number(r.min.x) << "\" y=\"" << format_number(r.min.y)
          << "\" width=\"" << format_number(r.width()) << "\" height=\"" << format_number(r.height())
          << "\" fill=\"#555\"/>\n";
    }
  }
  const double mark = std::max(0.05, 0.01 * std::max(b.width(), b.height()));
  for (std::size_t i = 0; i < problem.size(); ++i) {
    const RobotModel& m = problem.robots[i];
    const char* colour = detail::robot_colour(i);
    const Vec2 s = detail::marker_point(m, problem.queries[i].start);
    const Vec2 g = detail::marker_point(m, problem.queries[i].goal);
    const double rs = m.is_disc() ? m.radius : mark;
    out << "<circle class=\"start\" cx=\"" << format_number(s.x) << "\" cy=\"" << format_number(s.y) << "\" r=\""
        << format_number(rs) << "\" fill=\"" << colour << "\" opacity=\"0.5\"/>\n";
    out << "<circle class=\"goal\" cx=\"" << format_number(g.x) << "\" cy=\"" << format_number(g.y) << "\" r=\""
        << format_number(rs) << "\" fill=\"none\" stroke=\"" << colour << "\" stroke-width=\""
        << format_number(mark * 0.5) << "\"/>\n";
  }
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const auto& p = paths[i];
    if (p.empty()) continue;
    const auto r = static_cast<std::size_t>(std::clamp(p.robot_index, 0, static_cast<int>(problem.size()) - 1));
    const RobotModel& m = problem.robots[r];
    const char* colour = detail::robot_colour(r);
    if (m.is_arm()) {
      for (std::size_t k : {std::size_t{0}, p.size() / 2, p.size() - 1}) {
        detail::svg_arm(out, m, p.configs[k], colour, 2.0 * m.link_thickness, k == 0 ? 0.35 : 0.6);
      }
    }
    out << "<polyline class=\"path\" fill=\"none\" stroke=\"" << colour << "\" stroke-width=\""
        << format_number(mark * 0.6) << "\" points=\"";
    for (std::size_t k = 0; k < p.size(); ++k) {
      const Vec2 v = detail::marker_point(m, p.configs[k]);
      out << (k ? " " : "") << format_number(v.x) << ',' << format_number(v.y);
    }
    out << "\"/>\n";
  }
  out << "</g>\n</svg>\n";
}

inline void render_svg(const Problem& problem, const std::vector<TimedPath>& paths, const std::string& path) {
  detail::write_file(path, [&](std::ostream& out) { render_svg(problem, paths, out); });
}

}  // namespace earc
