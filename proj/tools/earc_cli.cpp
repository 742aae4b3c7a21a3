#include <CLI11.hpp>

#include <filesystem>
#include <iomanip>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "earc/earc.hpp"

namespace {

using namespace earc;

constexpr int kExitPlannerFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

void add_planner_options(CLI::App& cmd, PlannerConfig& c) {
  cmd.add_option("--seed", c.seed, "planner seed")->capture_default_str();
  cmd.add_option("--timeout", c.timeout, "per-solve timeout in seconds")->capture_default_str();
  cmd.add_option("--k", c.retrieval.k, "database candidates retrieved")->capture_default_str();
  cmd.add_option("--max-collisions", c.retrieval.max_collisions, "invalid segments tolerated before fallback")
      ->capture_default_str();
  cmd.add_option("--window", c.subproblem.window, "timesteps kept on each side of a conflict")->capture_default_str();
  cmd.add_option("--max-generations", c.subproblem.max_generations, "subproblem expansions before saturation")
      ->capture_default_str();
  cmd.add_option("--prm-samples", c.prm.num_samples, "subproblem roadmap samples")->capture_default_str();
  cmd.add_option("--prm-neighbors", c.prm.k_neighbors, "subproblem roadmap neighbours")->capture_default_str();
  cmd.add_option("--full-samples", c.full_prm.num_samples, "full-problem roadmap samples")->capture_default_str();
  cmd.add_option("--full-neighbors", c.full_prm.k_neighbors, "full-problem roadmap neighbours")->capture_default_str();
  cmd.add_option("--sub-steps", c.checks.sub_steps, "collision checks per timestep")->capture_default_str();
  cmd.add_option("--lightning-restarts", c.lightning_restarts, "extra from-scratch attempts in lightning")
      ->capture_default_str();
  cmd.add_option("--saturation-restarts", c.saturation_restarts, "larger-roadmap retries for a saturated subproblem")
      ->capture_default_str();
}

const std::map<std::string, ScenarioSpec::Kind> kKinds{{"mobile", ScenarioSpec::Kind::mobile},
                                                        {"manipulator", ScenarioSpec::Kind::manipulator}};

void add_scenario_options(CLI::App& cmd, ScenarioSpec& s, bool with_count = true) {
  cmd.add_option("--kind", s.kind, "mobile | manipulator")
      ->transform(CLI::CheckedTransformer(kKinds, CLI::ignore_case))
      ->capture_default_str();
  if (with_count) cmd.add_option("--count", s.count, "robots (mobile) or base pairs (manipulator)")->capture_default_str();
  cmd.add_option("--obstacles", s.obstacles, "random obstacles per scenario")->capture_default_str();
  cmd.add_option("--obstacle-min", s.obstacle_min)->capture_default_str();
  cmd.add_option("--obstacle-max", s.obstacle_max)->capture_default_str();
  cmd.add_option("--radius", s.radius, "disc robot radius")->capture_default_str();
  cmd.add_option("--area-per-robot", s.area_per_robot)->capture_default_str();
  cmd.add_option("--links", s.links, "arm links (1-5)")->capture_default_str();
  cmd.add_option("--link-length", s.link_length)->capture_default_str();
  cmd.add_option("--pair-gap", s.pair_gap, "distance between facing bases")->capture_default_str();
  cmd.add_option("--pair-spacing", s.pair_spacing, "distance between neighbouring pairs")->capture_default_str();
  cmd.add_option("--max-bend", s.max_bend, "joint range of sampled arm queries past the first joint")
      ->capture_default_str();
}

std::string full_db_path(const std::string& dir, int robots) {
  return (std::filesystem::path(dir) / ("full-" + std::to_string(robots) + ".db")).string();
}

void print_solution(const std::string& method, const Solution& s) {
  std::cout << "method " << method << "\nsuccess " << (s.success ? 1 : 0) << "\nplanning_seconds "
            << format_number(s.planning_seconds) << "\nconflicts_resolved " << s.stats.conflicts_resolved
            << "\ndb_hits " << s.stats.db_hits << "\ndb_repairs " << s.stats.db_repairs << "\ndb_misses "
            << s.stats.db_misses << "\nfallbacks " << s.stats.fallbacks() << "\nexpansions " << s.stats.expansions
            << "\nmerges " << s.stats.merges << '\n';
  if (!s.success) std::cout << "reason " << s.failure_reason << '\n';
}

// ---- verbs ---------------------------------------------------------------------

struct BuildDbArgs {
  ScenarioSpec spec;
  std::vector<std::string> counts;
  int per_key = 0;
  double delta = 0.0;
  std::uint64_t seed = 1;
  std::string out;
  PlannerConfig planner;
};

int build_db(const BuildDbArgs& a) {
  DatabaseBuildParams p;
  p.counts = default_db_counts(a.spec, a.per_key);
  if (!a.counts.empty()) {
    if (a.spec.kind != ScenarioSpec::Kind::mobile) throw std::invalid_argument("--counts applies to mobile databases");
    p.counts.clear();
    for (const auto& item : a.counts) {
      const auto colon = item.find(':');
      if (colon == std::string::npos) throw std::invalid_argument("--counts items look like <robots>:<entries>");
      const int robots = std::stoi(item.substr(0, colon));
      const int entries = std::stoi(item.substr(colon + 1));
      if (robots < 2 || entries <= 0) throw std::invalid_argument("bad --counts item '" + item + "'");
      p.counts[TransformKey::mobile(robots)] = entries;
    }
  }
  p.prm = a.planner.prm;
  p.checks = a.planner.checks;
  p.delta = a.delta;
  p.seed = a.seed;
  const Database db = build_database(prototype_robot(a.spec), p);
  save_database(db, a.out);
  std::cout << "entries " << db.size() << "\nbuild_seconds " << format_number(db.build_seconds) << '\n';
  for (const auto& [key, bucket] : db.buckets) std::cout << "  " << key.label() << ' ' << bucket.size() << '\n';
  return 0;
}

struct BuildFullArgs {
  ScenarioSpec spec;
  std::vector<int> ladder{2, 4, 8};
  int entries = 20;
  double delta = 0.0;
  std::string out_dir;
  PlannerConfig planner;
};

int build_full_db(const BuildFullArgs& a) {
  std::error_code ec;
  std::filesystem::create_directories(a.out_dir, ec);
  if (ec) throw IoError("cannot create '" + a.out_dir + "': " + ec.message());
  for (int n : a.ladder) {
    ScenarioSpec s = a.spec;
    s.count = n;
    s.validate();
    const auto cls = [&](std::uint64_t seed) {
      ScenarioSpec t = s;
      t.seed = seed;
      return generate_scenario(t, a.planner.checks);
    };
    const Database db = build_full_database(cls, a.entries, a.planner, a.delta);
    const std::string path = full_db_path(a.out_dir, s.robots());
    save_database(db, path);
    std::cout << s.robots() << " robots: " << db.size() << " entries, build_seconds "
              << format_number(db.build_seconds) << " -> " << path << '\n';
  }
  return 0;
}

struct PlanArgs {
  ScenarioSpec spec;
  std::string scenario;
  std::string method = "earc";
  std::string db;
  std::string trace;
  std::string svg;
  std::string save_scenario;
  PlannerConfig planner;
};

int plan(const PlanArgs& a) {
  const Method method = parse_method(a.method);
  const Problem problem = a.scenario.empty() ? generate_scenario(a.spec, a.planner.checks) : load_problem(a.scenario);
  if (!a.save_scenario.empty()) save_problem(problem, a.save_scenario);
  std::optional<Database> db;
  if (!a.db.empty()) db = load_database(a.db);
  if (db && method == Method::lightning && db->robots.size() != problem.size()) {
    throw std::invalid_argument("full database holds " + std::to_string(db->robots.size()) + "-robot problems, scenario has " +
                                std::to_string(problem.size()));
  }
  a.planner.validate();
  Solution sol;
  switch (method) {
    case Method::earc:
      sol = earc_solve(problem, db ? &*db : nullptr, a.planner);
      break;
    case Method::arc:
      sol = arc_solve(problem, a.planner);
      break;
    case Method::lightning:
      sol = lightning_solve(problem, db ? &*db : nullptr, a.planner);
      break;
  }
  print_solution(to_string(method), sol);
  if (!a.trace.empty()) save_trace(Trace{to_string(method), problem, sol}, a.trace);
  if (!a.svg.empty()) render_svg(problem, sol.paths, a.svg);
  return sol.success ? 0 : kExitPlannerFailure;
}

struct BenchArgs {
  ScenarioSpec spec;
  std::vector<int> ladder{2, 4, 8, 16};
  bool with_32 = false;
  std::vector<std::string> methods{"earc", "arc", "lightning"};
  int trials = 20;
  std::uint64_t master_seed = 1;
  std::string db;
  int per_key = 0;
  std::string full_db_dir;
  int full_entries = 20;
  std::string out = "bench-out";
  bool no_timings = false;
  PlannerConfig planner;
};

int bench(const BenchArgs& a) {
  std::vector<Method> methods;
  for (const auto& m : a.methods) methods.push_back(parse_method(m));
  std::vector<int> ladder = a.ladder;
  if (a.with_32 && std::find(ladder.begin(), ladder.end(), 32) == ladder.end()) ladder.push_back(32);
  std::vector<ScenarioSpec> cells;
  for (int n : ladder) {
    ScenarioSpec s = a.spec;
    s.count = n;
    s.validate();
    cells.push_back(s);
  }
  a.planner.validate();
  const auto wants = [&](Method m) { return std::find(methods.begin(), methods.end(), m) != methods.end(); };

  SuiteDatabases dbs;
  std::optional<Database> sub_db;
  if (wants(Method::earc)) {
    if (!a.db.empty()) {
      sub_db = load_database(a.db);
    } else {
      DatabaseBuildParams p;
      ScenarioSpec layout = a.spec;
      layout.count = *std::max_element(ladder.begin(), ladder.end());
      p.counts = default_db_counts(layout, a.per_key);
      p.prm = a.planner.prm;
      p.checks = a.planner.checks;
      sub_db = build_database(prototype_robot(a.spec), p);
    }
    std::cout << "subproblem database: " << sub_db->size() << " entries, build_seconds "
              << format_number(sub_db->build_seconds) << '\n';
    (a.spec.kind == ScenarioSpec::Kind::mobile ? dbs.mobile : dbs.manipulator) = &*sub_db;
  }
  std::map<int, Database> full;
  if (wants(Method::lightning)) {
    for (const auto& cell : cells) {
      const int robots = cell.robots();
      if (!a.full_db_dir.empty() && std::filesystem::exists(full_db_path(a.full_db_dir, robots))) {
        full[robots] = load_database(full_db_path(a.full_db_dir, robots));
      } else if (a.full_entries > 0) {
        const auto cls = [&](std::uint64_t seed) {
          ScenarioSpec t = cell;
          t.seed = seed;
          return generate_scenario(t, a.planner.checks);
        };
        try {
          full[robots] = build_full_database(cls, a.full_entries, a.planner);
        } catch (const std::exception& e) {
          std::cout << "full database for " << robots << " robots unavailable: " << e.what() << '\n';
          continue;
        }
        if (!a.full_db_dir.empty()) {
          std::filesystem::create_directories(a.full_db_dir);
          save_database(full[robots], full_db_path(a.full_db_dir, robots));
        }
      } else {
        continue;
      }
      std::cout << "full database " << robots << " robots: " << full[robots].size() << " entries, build_seconds "
                << format_number(full[robots].build_seconds) << '\n';
    }
    for (const auto& [n, db] : full) dbs.full[n] = &db;
  }

  const auto records = run_suite(methods, cells, a.trials, a.planner, dbs, a.master_seed);
  write_metrics(records, a.out, !a.no_timings);
  std::cout << std::left << std::setw(10) << "method" << std::setw(22) << "cell" << std::setw(9) << "success"
            << std::setw(12) << "mean_s" << "median_s\n";
  for (const auto& s : summarize(records)) {
    std::cout << std::setw(10) << to_string(s.method) << std::setw(22) << s.cell << std::setw(9)
              << (std::to_string(s.successes) + "/" + std::to_string(s.trials)) << std::setw(12)
              << format_number(s.mean_seconds) << format_number(s.median_seconds) << '\n';
  }
  std::cout << "metrics written to " << a.out << '\n';
  return 0;
}

int inspect_db(const std::string& path) {
  const Database db = load_database(path);
  std::cout << "format EARC-DB " << Database::kFormatVersion << "\nrobots " << db.robots.size();
  if (!db.robots.empty()) std::cout << " (" << (db.robots.front().is_disc() ? "disc" : "arm") << ')';
  std::cout << "\ndelta " << format_number(db.delta) << "\nbuild_seconds " << format_number(db.build_seconds)
            << "\nnext_id " << db.next_id << "\nentries " << db.size() << '\n';
  for (const auto& [key, bucket] : db.buckets) {
    double steps = 0.0;
    for (const auto& e : bucket) {
      for (const auto& p : e.paths) steps += static_cast<double>(p.size());
    }
    std::cout << "  " << std::left << std::setw(24) << key.label() << std::setw(7) << bucket.size()
              << "mean path length " << format_number(steps / static_cast<double>(bucket.size() * key.robots)) << '\n';
  }
  return 0;
}

int render(const std::string& trace_path, const std::string& out) {
  const Trace t = load_trace(trace_path);
  render_svg(t.problem, t.solution.paths, out);
  std::cout << "rendered " << t.solution.paths.size() << " paths to " << out << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"E-ARC multi-robot motion planning toolkit"};
  app.set_config("--config", "", "TOML or INI file with option defaults");
  app.require_subcommand(1);

  BuildDbArgs bd;
  auto* c_bd = app.add_subcommand("build-db", "build a subproblem experience database");
  add_scenario_options(*c_bd, bd.spec);
  c_bd->add_option("--counts", bd.counts, "mobile entries per key as <robots>:<entries>")->delimiter(',');
  c_bd->add_option("--per-key", bd.per_key, "entries per key (0 = defaults)");
  c_bd->add_option("--delta", bd.delta, "novelty threshold (0 = default)");
  c_bd->add_option("--db-seed", bd.seed, "generation seed")->capture_default_str();
  c_bd->add_option("-o,--out", bd.out, "output database file")->required();
  add_planner_options(*c_bd, bd.planner);

  BuildFullArgs bf;
  auto* c_bf = app.add_subcommand("build-full-db", "build whole-problem databases for the lightning baseline");
  add_scenario_options(*c_bf, bf.spec, false);
  c_bf->add_option("--ladder", bf.ladder, "robot (or pair) counts")->delimiter(',')->capture_default_str();
  c_bf->add_option("--entries", bf.entries, "entries per database")->capture_default_str();
  c_bf->add_option("--delta", bf.delta, "novelty threshold (0 = default)");
  c_bf->add_option("-o,--out-dir", bf.out_dir, "output directory")->required();
  add_planner_options(*c_bf, bf.planner);

  PlanArgs pl;
  auto* c_pl = app.add_subcommand("plan", "solve one scenario");
  add_scenario_options(*c_pl, pl.spec);
  c_pl->add_option("--scenario-seed", pl.spec.seed, "seed of the generated scenario")->capture_default_str();
  c_pl->add_option("--scenario", pl.scenario, "scenario file instead of a generated one");
  c_pl->add_option("--method", pl.method, "earc | arc | lightning")->capture_default_str();
  c_pl->add_option("--db", pl.db, "database file (subproblem db for earc, full db for lightning)");
  c_pl->add_option("--trace", pl.trace, "write the solution trace here");
  c_pl->add_option("--svg", pl.svg, "write an SVG rendering here");
  c_pl->add_option("--save-scenario", pl.save_scenario, "write the scenario here");
  add_planner_options(*c_pl, pl.planner);

  BenchArgs be;
  auto* c_be = app.add_subcommand("bench", "run seeded trials and write metrics");
  add_scenario_options(*c_be, be.spec, false);
  c_be->add_option("--ladder", be.ladder, "robot (or pair) counts")->delimiter(',')->capture_default_str();
  c_be->add_flag("--with-32", be.with_32, "add the 32-robot cell");
  c_be->add_option("--methods", be.methods, "methods to run")->delimiter(',')->capture_default_str();
  c_be->add_option("--trials", be.trials, "trials per cell")->capture_default_str();
  c_be->add_option("--master-seed", be.master_seed)->capture_default_str();
  c_be->add_option("--db", be.db, "subproblem database (built when omitted)");
  c_be->add_option("--per-key", be.per_key, "entries per key when building the database (0 = defaults)");
  c_be->add_option("--full-db-dir", be.full_db_dir, "directory of full-<n>.db files, read and written");
  c_be->add_option("--full-entries", be.full_entries, "entries of missing full databases (0 = none)")
      ->capture_default_str();
  c_be->add_option("-o,--out", be.out, "metrics directory")->capture_default_str();
  c_be->add_flag("--no-timings", be.no_timings, "omit wall-clock columns so reruns compare byte-for-byte");
  add_planner_options(*c_be, be.planner);

  std::string inspect_path;
  auto* c_in = app.add_subcommand("inspect-db", "print database statistics");
  c_in->add_option("db", inspect_path, "database file")->required();

  std::string trace_in, svg_out;
  auto* c_re = app.add_subcommand("render", "render a trace to SVG");
  c_re->add_option("--trace", trace_in, "trace file")->required();
  c_re->add_option("-o,--out", svg_out, "SVG file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (c_bd->parsed()) return build_db(bd);
    if (c_bf->parsed()) return build_full_db(bf);
    if (c_pl->parsed()) return plan(pl);
    if (c_be->parsed()) return bench(be);
    if (c_in->parsed()) return inspect_db(inspect_path);
    if (c_re->parsed()) return render(trace_in, svg_out);
  } catch (const LoadError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "failed: " << e.what() << '\n';
    return kExitPlannerFailure;
  }
  return kExitUsage;
}
