#pragma once

// Top-level planners: E-ARC (conflict-driven subproblem resolution with the
// experience database first), plain ARC, and a Lightning-style full-problem
// experience baseline.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "earc/deadline.hpp"
#include "earc/experience.hpp"
#include "earc/local_solvers.hpp"
#include "earc/paths.hpp"
#include "earc/problem.hpp"
#include "earc/roadmap.hpp"
#include "earc/subproblem.hpp"

namespace earc {

struct PlannerConfig {
  PrmParams prm = PrmParams::subproblem_defaults();
  /// Roadmaps for individual paths and full-problem planning.
  PrmParams full_prm = PrmParams::full_defaults();
  SubproblemParams subproblem;
  RetrievalParams retrieval;
  CheckSettings checks;
  double timeout = 60.0;
  std::uint64_t seed = 1;
  int max_iterations = 5000;
  /// Extra reseeded from-scratch attempts in the Lightning baseline.
  int lightning_restarts = 2;
  /// Reseeded attempts on a saturated subproblem, starting at full_prm size
  /// and doubling the samples each time.
  int saturation_restarts = 4;

  void validate() const {
    if (!(timeout > 0.0)) throw std::invalid_argument("timeout must be positive");
    if (max_iterations <= 0 || lightning_restarts < 0 || saturation_restarts < 0) {
      throw std::invalid_argument("invalid planner limits");
    }
    subproblem.validate();
    retrieval.validate();
  }
};

enum class Resolution { db_hit, db_repair, decoupled, coupled };

inline const char* to_string(Resolution r) {
  switch (r) {
    case Resolution::db_hit:
      return "db-hit";
    case Resolution::db_repair:
      return "db-repair";
    case Resolution::decoupled:
      return "decoupled";
    case Resolution::coupled:
      return "coupled";
  }
  return "?";
}

struct SolveStats {
  int conflicts_resolved = 0;
  int expansions = 0;
  int merges = 0;
  int db_hits = 0;
  int db_repairs = 0;
  int db_misses = 0;
  int decoupled = 0;
  int coupled = 0;
  std::vector<Resolution> sources;

  int fallbacks() const { return decoupled + coupled; }

  void record(Resolution r) {
    sources.push_back(r);
    ++conflicts_resolved;
    switch (r) {
      case Resolution::db_hit:
        ++db_hits;
        break;
      case Resolution::db_repair:
        ++db_repairs;
        break;
      case Resolution::decoupled:
        ++decoupled;
        break;
      case Resolution::coupled:
        ++coupled;
        break;
    }
  }

  friend bool operator==(const SolveStats&, const SolveStats&) = default;
};

struct Solution {
  bool success = false;
  std::vector<TimedPath> paths;
  SolveStats stats;
  double planning_seconds = 0.0;
  std::string failure_reason;

  /// Equality of everything except the wall-clock time.
  bool same_result(const Solution& o) const {
    return success == o.success && paths == o.paths && stats == o.stats && failure_reason == o.failure_reason;
  }
};

/// The whole problem as a subproblem (every robot, whole environment).
inline Subproblem whole_problem(const Problem& problem) {
  Subproblem sub;
  sub.env = problem.env;
  sub.models = problem.robots;
  sub.queries = problem.queries;
  for (std::size_t r = 0; r < problem.size(); ++r) {
    sub.robots.push_back(static_cast<int>(r));
    sub.region.push_back(full_box(problem.robots[r], problem.env.boundary));
  }
  sub.covers_problem = true;
  return sub;
}

/// Per-robot PRM paths ignoring the other robots, padded to one horizon.
inline constexpr int kIndividualAttempts = 3;

inline std::optional<std::vector<TimedPath>> individual_paths(const Problem& problem, const PlannerConfig& config,
                                                              const Deadline& deadline = Deadline::never()) {
  std::vector<TimedPath> paths;
  for (std::size_t r = 0; r < problem.size(); ++r) {
    deadline.check();
    const int robot = static_cast<int>(r);
    Space space{{problem.robots[r]}, {robot}, {full_box(problem.robots[r], problem.env.boundary)}, problem.env,
                config.checks};
    if (config.full_prm.edge_step > 0.0) space.checks.step_cap = config.full_prm.edge_step;
    const double step = effective_step(problem.robots[r], space.checks);
    const CompositeConfiguration start{problem.queries[r].start};
    const CompositeConfiguration goal{problem.queries[r].goal};
    if (!space.valid(start) || !space.valid(goal)) return std::nullopt;
    std::vector<Configuration> raw;
    if (space.edge_valid(start, goal)) {
      raw = {start.front(), goal.front()};
    } else {
      for (int attempt = 0; attempt < kIndividualAttempts && raw.empty(); ++attempt) {
        PrmParams p = config.full_prm;
        p.seed = derive_seed(config.seed, {0x1d1dULL, static_cast<std::uint64_t>(r), static_cast<std::uint64_t>(attempt)});
        std::optional<Roadmap> roadmap;
        try {
          roadmap.emplace(build_prm(space, p, deadline));
        } catch (const ConstructionError&) {
          continue;
        }
        const auto found = query(*roadmap, start, goal, deadline);
        if (!found) continue;
        for (const auto& c : shortcut(*found, roadmap->space(), deadline)) raw.push_back(c.front());
      }
      if (raw.empty()) return std::nullopt;
    }
    TimedPath path = discretize(raw, problem.robots[r], step);
    path.robot_index = robot;
    for (auto& c : path.configs) c.robot_index = robot;
    paths.push_back(std::move(path));
  }
  pad_all(paths);
  return paths;
}

namespace detail {

struct LocalResult {
  LocalPaths paths;
  Resolution source;
};

inline PrmParams seeded(const PrmParams& base, std::uint64_t seed) {
  PrmParams p = base;
  p.seed = seed;
  return p;
}

/// One attempt on a subproblem: database, then decoupled, then coupled.
inline bool endpoints_valid(const Subproblem& sub, const CheckSettings& checks) {
  return composite_config_valid(sub.starts(), sub.models, sub.env, checks) &&
         composite_config_valid(sub.goals(), sub.models, sub.env, checks);
}

inline std::optional<LocalResult> resolve_once(const Subproblem& sub, const Environment& env, const Database* db,
                                               const PlannerConfig& config, std::uint64_t attempt_seed,
                                               SolveStats& stats, const Deadline& deadline) {
  if (db && db->size() > 0) {
    const auto hit = database_planning(*db, sub, env, config.retrieval,
                                       seeded(config.prm, derive_seed(attempt_seed, {0})), config.checks, deadline);
    if (hit) return LocalResult{hit->paths, hit->repaired ? Resolution::db_repair : Resolution::db_hit};
    ++stats.db_misses;
  }
  if (auto p = decoupled_prm_solve(sub, seeded(config.prm, derive_seed(attempt_seed, {1})), config.checks, deadline)) {
    return LocalResult{std::move(*p), Resolution::decoupled};
  }
  if (auto p = coupled_prm_solve(sub, seeded(config.prm, derive_seed(attempt_seed, {2})), config.checks, deadline)) {
    return LocalResult{std::move(*p), Resolution::coupled};
  }
  return std::nullopt;
}

inline std::optional<LocalResult> resolve_saturated(const Subproblem& sub, const Environment& env,
                                                    const PlannerConfig& config, std::uint64_t seed, SolveStats& stats,
                                                    const Deadline& deadline) {
  if (!endpoints_valid(sub, config.checks)) return std::nullopt;
  PlannerConfig bigger = config;
  bigger.prm = config.full_prm;
  for (int restart = 0; restart < config.saturation_restarts; ++restart) {
    deadline.check();
    auto local = resolve_once(sub, env, nullptr, bigger, derive_seed(seed, {static_cast<std::uint64_t>(restart)}), stats,
                              deadline);
    if (local) return local;
    bigger.prm.num_samples *= 2;
  }
  return std::nullopt;
}

}  // namespace detail

/// Conflict-driven planning: individual paths, then repeatedly cut a
/// subproblem around the first conflict and resolve it (database first,
/// then decoupled, then coupled; expanding on failure) until conflict-free.
/// `db` may be null.
inline Solution earc_solve(const Problem& problem, const Database* db, const PlannerConfig& config) {
  config.validate();
  const Stopwatch watch;
  const Deadline deadline = Deadline::after(config.timeout);
  Solution sol;
  auto fail = [&](std::string reason) {
    sol.success = false;
    sol.paths.clear();
    sol.failure_reason = std::move(reason);
    sol.planning_seconds = watch.seconds();
    return sol;
  };
  try {
    problem.validate(config.checks);
  } catch (const std::invalid_argument& e) {
    return fail(std::string("invalid problem: ") + e.what());
  }
  try {
    auto initial = individual_paths(problem, config, deadline);
    if (!initial) return fail("no individual path");
    std::vector<TimedPath> paths = std::move(*initial);
    const auto& models = problem.robots;
    std::vector<Subproblem> resolved;
    std::vector<std::pair<int, int>> seen_pairs;

    for (int iteration = 0; iteration < config.max_iterations; ++iteration) {
      deadline.check();
      const auto conflict = find_first_conflict(paths, models, config.checks);
      if (!conflict) {
        sol.success = true;
        sol.paths = std::move(paths);
        sol.planning_seconds = watch.seconds();
        return sol;
      }
      Subproblem sub = create_subproblem(*conflict, paths, models, problem.env, config.subproblem);
      // A conflict that repeats (same pair again, or inside one earlier
      // group around this time) merges the earlier resolutions involved.
      auto active = [&](const Subproblem& r, int robot) {
        return conflict->t >= r.t_lo && conflict->t <= r.t_hi &&
               std::find(r.robots.begin(), r.robots.end(), robot) != r.robots.end();
      };
      const auto pair = std::pair{conflict->robot_i, conflict->robot_j};
      const bool repeated_pair = std::find(seen_pairs.begin(), seen_pairs.end(), pair) != seen_pairs.end();
      const bool inside_group = std::any_of(resolved.begin(), resolved.end(), [&](const Subproblem& r) {
        return active(r, conflict->robot_i) && active(r, conflict->robot_j);
      });
      if (!repeated_pair) seen_pairs.push_back(pair);
      if (repeated_pair || inside_group) {
        const auto before = sub.robots.size();
        const int span = sub.t_hi - sub.t_lo;
        for (auto it = resolved.begin(); it != resolved.end();) {
          if (active(*it, conflict->robot_i) || active(*it, conflict->robot_j)) {
            sub = merge_groups(sub, *it, paths, models, problem.env, config.subproblem);
            it = resolved.erase(it);
            ++sol.stats.merges;
          } else {
            ++it;
          }
        }
        if (sub.robots.size() == before && sub.t_hi - sub.t_lo == span) {
          if (auto bigger = expand_subproblem(sub, paths, models, problem.env, config.subproblem)) {
            sub = std::move(*bigger);
          }
        }
      }

      std::optional<detail::LocalResult> local;
      for (int generation = 0;; ++generation) {
        if (detail::endpoints_valid(sub, config.checks)) {
          const std::uint64_t attempt_seed = derive_seed(
              config.seed, {static_cast<std::uint64_t>(iteration), static_cast<std::uint64_t>(generation)});
          local = detail::resolve_once(sub, problem.env, db, config, attempt_seed, sol.stats, deadline);
          if (local) break;
        }
        auto next = expand_subproblem(sub, paths, models, problem.env, config.subproblem);
        if (!next) {
          local = detail::resolve_saturated(sub, problem.env, config,
                                            derive_seed(config.seed, {static_cast<std::uint64_t>(iteration), 0x5a7ULL}),
                                            sol.stats, deadline);
          if (local) break;
          return fail("saturated subproblem could not be solved");
        }
        sub = std::move(*next);
        ++sol.stats.expansions;
      }

      const int old_len = sub.t_hi - sub.t_lo;
      const int new_len = common_horizon(local->paths);
      for (std::size_t k = 0; k < sub.size(); ++k) {
        auto& full = paths[static_cast<std::size_t>(sub.robots[k])];
        full = splice(full, local->paths[k], sub.t_lo, sub.t_hi);
      }
      for (auto& p : paths) p = trim_padding(std::move(p));
      pad_all(paths);
      const int shift = new_len - old_len;
      for (auto& r : resolved) {
        if (r.t_lo >= sub.t_hi) {
          r.t_lo += shift;
          r.t_hi += shift;
        }
      }
      sub.t_hi = sub.t_lo + new_len;
      resolved.push_back(std::move(sub));
      sol.stats.record(local->source);
    }
    return fail("iteration limit reached");
  } catch (const DeadlineExceeded&) {
    return fail("timeout");
  }
}

/// The hierarchy without a database.
inline Solution arc_solve(const Problem& problem, const PlannerConfig& config) {
  return earc_solve(problem, nullptr, config);
}

namespace detail {

inline std::optional<LocalPaths> lightning_retrieve(const Problem& problem, const Database& db,
                                                    const PlannerConfig& config, const Deadline& deadline) {
  const Subproblem sub = whole_problem(problem);
  const KeyMatch match{TransformKey::full_problem(static_cast<int>(problem.size())), false};
  const auto closest = k_closest(db, sub, config.retrieval.k, match);
  if (closest.empty()) return std::nullopt;
  std::vector<TransformedCandidate> cands;
  for (const auto& c : closest) cands.push_back(transform_entry(*c.entry, sub, match));
  const auto best = validate_candidates(cands, sub, problem.env, config.checks);
  if (!best) return std::nullopt;
  const auto& chosen = cands[best->index];
  if (best->invalid_count == 0) return connect_path(chosen.paths, sub, config.checks);
  if (best->invalid_count >= config.retrieval.max_collisions) return std::nullopt;
  const auto fixed = repair_path(chosen.paths, best->invalid, sub, problem.env,
                                 seeded(config.prm, derive_seed(config.seed, {0x11ULL})), config.checks, deadline);
  if (!fixed) return std::nullopt;
  return connect_path(*fixed, sub, config.checks);
}

inline std::optional<LocalPaths> lightning_scratch(const Problem& problem, const PlannerConfig& config,
                                                   const Deadline& deadline) {
  const Subproblem sub = whole_problem(problem);
  for (int attempt = 0; attempt <= config.lightning_restarts; ++attempt) {
    deadline.check();
    const std::uint64_t s = derive_seed(config.seed, {0x5c7a7cULL, static_cast<std::uint64_t>(attempt)});
    if (auto p = decoupled_prm_solve(sub, seeded(config.full_prm, derive_seed(s, {1})), config.checks, deadline)) {
      return p;
    }
    if (auto p = coupled_prm_solve(sub, seeded(config.full_prm, derive_seed(s, {2})), config.checks, deadline)) {
      return p;
    }
  }
  return std::nullopt;
}

}  // namespace detail

/// Retrieve-and-repair over whole-problem entries raced against planning
/// the full problem from scratch. The arms run one after the other on a
/// shared clock: the scratch arm only gets as long as the retrieval arm took
/// when retrieval succeeded, so the result is the one that would finish
/// first under an even time split. Reported time is the sum of both arms.
inline Solution lightning_solve(const Problem& problem, const Database* full_db, const PlannerConfig& config) {
  config.validate();
  const Stopwatch watch;
  const Deadline deadline = Deadline::after(config.timeout);
  Solution sol;
  try {
    problem.validate(config.checks);
  } catch (const std::invalid_argument& e) {
    sol.failure_reason = std::string("invalid problem: ") + e.what();
    sol.planning_seconds = watch.seconds();
    return sol;
  }
  std::optional<LocalPaths> retrieved;
  double retrieve_seconds = 0.0;
  try {
    if (full_db && full_db->size() > 0) {
      const Stopwatch arm;
      retrieved = detail::lightning_retrieve(problem, *full_db, config, deadline);
      retrieve_seconds = arm.seconds();
      if (retrieved) {
        ++sol.stats.db_hits;
      } else {
        ++sol.stats.db_misses;
      }
    }
    const Deadline scratch_deadline =
        retrieved ? Deadline::after(std::min(retrieve_seconds, config.timeout - watch.seconds())) : deadline;
    std::optional<LocalPaths> scratch;
    try {
      scratch = detail::lightning_scratch(problem, config, scratch_deadline);
    } catch (const DeadlineExceeded&) {
      if (!retrieved) throw;
    }
    if (scratch) {
      sol.paths = std::move(*scratch);
      ++sol.stats.coupled;
    } else if (retrieved) {
      sol.paths = std::move(*retrieved);
    } else {
      sol.failure_reason = "both arms failed";
      sol.planning_seconds = watch.seconds();
      return sol;
    }
  } catch (const DeadlineExceeded&) {
    sol.failure_reason = "timeout";
    sol.planning_seconds = watch.seconds();
    return sol;
  }
  pad_all(sol.paths);
  sol.success = true;
  sol.planning_seconds = watch.seconds();
  return sol;
}

/// Whole-problem database for the Lightning baseline: solves instances of
/// the class with lightning_solve itself and keeps the novel solutions.
inline Database build_full_database(const std::function<Problem(std::uint64_t)>& problem_class, int n,
                                    const PlannerConfig& config, double delta = 0.0) {
  if (n < 0) throw std::invalid_argument("entry count must be non-negative");
  const Stopwatch watch;
  Database db;
  int stored = 0;
  for (int attempt = 0; attempt < 20 * n && stored < n; ++attempt) {
    const std::uint64_t seed = derive_seed(config.seed, {0xf011ULL, static_cast<std::uint64_t>(attempt)});
    const Problem problem = problem_class(seed);
    if (db.robots.empty()) {
      db.robots = problem.robots;
      db.delta = delta > 0.0 ? delta : default_delta(problem.robots.front());
    }
    PlannerConfig c = config;
    c.seed = seed;
    const Solution sol = lightning_solve(problem, &db, c);
    if (!sol.success) continue;
    const Subproblem sub = whole_problem(problem);
    if (insert_if_novel(db, make_entry(TransformKey::full_problem(static_cast<int>(problem.size())), sub, sol.paths),
                        db.delta)) {
      ++stored;
    }
  }
  if (2 * stored < n) {
    throw ConstructionError("full database stored " + std::to_string(stored) + " of " + std::to_string(n) +
                            " requested entries");
  }
  db.build_seconds = watch.seconds();
  return db;
}

}  // namespace earc
