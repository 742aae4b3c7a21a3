#pragma once

// Versioned line-oriented text formats for databases, scenarios and traces.
// One record per line: a keyword followed by whitespace-separated fields.
// Real numbers are written with 9 significant digits.
//
//   EARC-DB 1
//   robots <n>                      followed by n robot records
//   delta <d>
//   resolution <validation step> <sub steps>
//   build_seconds <s>
//   next_id <n>
//   entries <n>                     followed by n entry blocks:
//     entry <id> <kind> <robots> <dx> <dy> <dh> <anchor x> <anchor y>
//     query <slot> <dof> <start...> <goal...>          (one per slot)
//     path <slot> <length> <dof> <configs...>          (one per slot)
//   end
//
//   EARC-SCENARIO 1
//   boundary <x0> <y0> <x1> <y1>
//   obstacles <n>     then n of: circle <cx> <cy> <r> | rect <x0> <y0> <x1> <y1>
//   robots <n>        then n of: disc <r> | arm <bx> <by> <heading> <thickness> <links> <lengths...>
//   queries <n>       then n of: query <robot> <dof> <start...> <goal...>
//   end
//
//   EARC-TRACE 1
//   method <name>
//   success <0|1>
//   planning_seconds <s>
//   reason <free text to end of line>
//   stats <conflicts> <expansions> <merges> <hits> <repairs> <misses> <decoupled> <coupled>
//   scenario block without its header line, ending in its own `end`
//   paths <n>         then n of: path <robot> <length> <dof> <configs...>
//   end

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "earc/experience.hpp"
#include "earc/planners.hpp"
#include "earc/problem.hpp"

namespace earc {

class LoadError : public std::runtime_error {
 public:
  LoadError(int line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

namespace detail {

class RecordWriter {
 public:
  explicit RecordWriter(std::ostream& out) : out_(out) {}

  RecordWriter& word(const std::string& s) {
    sep();
    out_ << s;
    return *this;
  }
  RecordWriter& num(double v) { return word(format_number(v)); }
  RecordWriter& integer(long long v) { return word(std::to_string(v)); }
  RecordWriter& config(const Configuration& c) {
    for (std::size_t i = 0; i < c.dof; ++i) num(c[i]);
    return *this;
  }
  void end() {
    out_ << '\n';
    first_ = true;
  }

 private:
  void sep() {
    if (!first_) out_ << ' ';
    first_ = false;
  }
  std::ostream& out_;
  bool first_ = true;
};

class RecordReader {
 public:
  explicit RecordReader(std::istream& in) : in_(in) {}

  /// Reads the next non-empty line; throws at end of input.
  void next(const std::string& expected) {
    std::string text;
    while (std::getline(in_, text)) {
      ++line_;
      if (!text.empty() && text.back() == '\r') text.pop_back();
      if (text.find_first_not_of(" \t") == std::string::npos) continue;
      raw_ = text;
      std::istringstream ss(text);
      tokens_.clear();
      for (std::string t; ss >> t;) tokens_.push_back(t);
      pos_ = 0;
      return;
    }
    throw LoadError(line_ + 1, "unexpected end of input, expected '" + expected + "'");
  }

  void expect_record(const std::string& keyword) {
    next(keyword);
    const std::string got = word();
    if (got != keyword) fail("expected '" + keyword + "', found '" + got + "'");
  }

  std::string word() {
    if (pos_ >= tokens_.size()) fail("missing field");
    return tokens_[pos_++];
  }

  double num() {
    const std::string t = word();
    try {
      std::size_t used = 0;
      const double v = std::stod(t, &used);
      if (used != t.size()) throw std::invalid_argument(t);
      return v;
    } catch (const std::exception&) {
      fail("not a number: '" + t + "'");
    }
  }

  long long integer() {
    const std::string t = word();
    try {
      std::size_t used = 0;
      const long long v = std::stoll(t, &used);
      if (used != t.size()) throw std::invalid_argument(t);
      return v;
    } catch (const std::exception&) {
      fail("not an integer: '" + t + "'");
    }
  }

  long long count(long long max = 100000000) {
    const long long v = integer();
    if (v < 0 || v > max) fail("count out of range: " + std::to_string(v));
    return v;
  }

  Configuration config(std::size_t dof, int robot) {
    Configuration c;
    c.dof = static_cast<std::uint8_t>(dof);
    c.robot_index = robot;
    for (std::size_t i = 0; i < dof; ++i) c[i] = num();
    return c;
  }

  /// Remainder of the current line after the consumed tokens' keyword.
  std::string rest_of_line() const {
    const auto at = raw_.find(tokens_.front());
    std::string r = raw_.substr(at + tokens_.front().size());
    const auto b = r.find_first_not_of(" \t");
    return b == std::string::npos ? std::string() : r.substr(b);
  }

  void done() {
    if (pos_ != tokens_.size()) fail("unexpected extra field '" + tokens_[pos_] + "'");
  }

  [[noreturn]] void fail(const std::string& message) const { throw LoadError(line_, message); }

  void header(const std::string& magic, int version) {
    expect_record(magic);
    const long long v = integer();
    if (v != version) fail("unsupported " + magic + " version " + std::to_string(v));
    done();
  }

 private:
  std::istream& in_;
  std::vector<std::string> tokens_;
  std::string raw_;
  std::size_t pos_ = 0;
  int line_ = 0;
};

inline void write_robot(RecordWriter& w, const RobotModel& m) {
  if (m.is_disc()) {
    w.word("disc").num(m.radius).end();
    return;
  }
  w.word("arm").num(m.base.position.x).num(m.base.position.y).num(m.base.heading).num(m.link_thickness);
  w.integer(static_cast<long long>(m.link_lengths.size()));
  for (double l : m.link_lengths) w.num(l);
  w.end();
}

inline RobotModel read_robot(RecordReader& r) {
  r.next("disc|arm");
  const std::string kind = r.word();
  try {
    if (kind == "disc") {
      const double radius = r.num();
      r.done();
      return RobotModel::disc(radius);
    }
    if (kind == "arm") {
      const double x = r.num(), y = r.num(), h = r.num(), th = r.num();
      const auto n = r.count(kMaxDof);
      std::vector<double> links;
      for (long long i = 0; i < n; ++i) links.push_back(r.num());
      r.done();
      return RobotModel::planar_arm(Pose2({x, y}, h), links, th);
    }
  } catch (const std::invalid_argument& e) {
    r.fail(e.what());
  }
  r.fail("unknown robot kind '" + kind + "'");
}

inline void write_path(RecordWriter& w, int slot, const TimedPath& p) {
  const std::size_t dof = p.configs.front().dof;
  w.word("path").integer(slot).integer(static_cast<long long>(p.size())).integer(static_cast<long long>(dof));
  for (const auto& c : p.configs) w.config(c);
  w.end();
}

inline TimedPath read_path(RecordReader& r, int expected_slot) {
  r.expect_record("path");
  const auto slot = r.integer();
  if (slot != expected_slot) r.fail("expected path " + std::to_string(expected_slot));
  const auto len = r.count();
  const auto dof = r.count(kMaxDof);
  if (len == 0 || dof == 0) r.fail("empty path");
  TimedPath p;
  p.robot_index = static_cast<int>(slot);
  for (long long i = 0; i < len; ++i) p.configs.push_back(r.config(static_cast<std::size_t>(dof), p.robot_index));
  r.done();
  return p;
}

inline void write_query(RecordWriter& w, int slot, const Query& q) {
  w.word("query").integer(slot).integer(static_cast<long long>(q.start.dof)).config(q.start).config(q.goal).end();
}

inline Query read_query(RecordReader& r, int expected_slot) {
  r.expect_record("query");
  const auto slot = r.integer();
  if (slot != expected_slot) r.fail("expected query " + std::to_string(expected_slot));
  const auto dof = r.count(kMaxDof);
  if (dof == 0) r.fail("query without degrees of freedom");
  Query q;
  q.start = r.config(static_cast<std::size_t>(dof), static_cast<int>(slot));
  q.goal = r.config(static_cast<std::size_t>(dof), static_cast<int>(slot));
  r.done();
  return q;
}

inline void write_problem_body(RecordWriter& w, const Problem& p) {
  const Rect& b = p.env.boundary;
  w.word("boundary").num(b.min.x).num(b.min.y).num(b.max.x).num(b.max.y).end();
  w.word("obstacles").integer(static_cast<long long>(p.env.obstacles.size())).end();
  for (const auto& o : p.env.obstacles) {
    if (const auto* c = std::get_if<Circle>(&o)) {
      w.word("circle").num(c->center.x).num(c->center.y).num(c->radius).end();
    } else {
      const Rect& r = std::get<Rect>(o);
      w.word("rect").num(r.min.x).num(r.min.y).num(r.max.x).num(r.max.y).end();
    }
  }
  w.word("robots").integer(static_cast<long long>(p.robots.size())).end();
  for (const auto& m : p.robots) write_robot(w, m);
  w.word("queries").integer(static_cast<long long>(p.queries.size())).end();
  for (std::size_t i = 0; i < p.queries.size(); ++i) write_query(w, static_cast<int>(i), p.queries[i]);
  w.word("end").end();
}

inline Problem read_problem_body(RecordReader& r) {
  Problem p;
  r.expect_record("boundary");
  {
    const double x0 = r.num(), y0 = r.num(), x1 = r.num(), y1 = r.num();
    p.env.boundary = Rect{{x0, y0}, {x1, y1}};
    r.done();
  }
  r.expect_record("obstacles");
  const auto n_obs = r.count();
  r.done();
  for (long long i = 0; i < n_obs; ++i) {
    r.next("circle|rect");
    const std::string kind = r.word();
    if (kind == "circle") {
      const double x = r.num(), y = r.num(), rad = r.num();
      p.env.obstacles.push_back(Circle{{x, y}, rad});
    } else if (kind == "rect") {
      const double x0 = r.num(), y0 = r.num(), x1 = r.num(), y1 = r.num();
      p.env.obstacles.push_back(Rect{{x0, y0}, {x1, y1}});
    } else {
      r.fail("unknown obstacle kind '" + kind + "'");
    }
    r.done();
  }
  r.expect_record("robots");
  const auto n_rob = r.count();
  r.done();
  for (long long i = 0; i < n_rob; ++i) p.robots.push_back(read_robot(r));
  r.expect_record("queries");
  const auto n_q = r.count();
  r.done();
  for (long long i = 0; i < n_q; ++i) {
    Query q = read_query(r, static_cast<int>(i));
    if (q.start.dof != p.robots.at(static_cast<std::size_t>(i)).dof()) r.fail("query DOF does not match robot");
    p.queries.push_back(q);
  }
  r.expect_record("end");
  r.done();
  try {
    p.env.validate();
  } catch (const std::invalid_argument& e) {
    r.fail(e.what());
  }
  return p;
}

template <typename F>
void write_file(const std::string& path, F&& body) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  body(out);
  out.flush();
  if (!out) throw IoError("failed writing '" + path + "'");
}

template <typename F>
auto read_file(const std::string& path, F&& body) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return body(in);
}

}  // namespace detail

// ---- database ----------------------------------------------------------------

inline void save_database(const Database& db, std::ostream& out) {
  detail::RecordWriter w(out);
  w.word("EARC-DB").integer(Database::kFormatVersion).end();
  w.word("robots").integer(static_cast<long long>(db.robots.size())).end();
  for (const auto& m : db.robots) detail::write_robot(w, m);
  w.word("delta").num(db.delta).end();
  const double step = db.robots.empty() ? 0.0 : validation_step(db.robots.front());
  w.word("resolution").num(step).integer(CheckSettings{}.sub_steps).end();
  w.word("build_seconds").num(db.build_seconds).end();
  w.word("next_id").integer(static_cast<long long>(db.next_id)).end();
  w.word("entries").integer(static_cast<long long>(db.size())).end();
  for (const auto& [key, bucket] : db.buckets) {
    for (const auto& e : bucket) {
      w.word("entry").integer(static_cast<long long>(e.id)).integer(static_cast<int>(key.kind)).integer(key.robots);
      w.integer(key.rel[0]).integer(key.rel[1]).integer(key.rel[2]).num(e.anchor.x).num(e.anchor.y).end();
      for (std::size_t s = 0; s < e.queries.size(); ++s) detail::write_query(w, static_cast<int>(s), e.queries[s]);
      for (std::size_t s = 0; s < e.paths.size(); ++s) detail::write_path(w, static_cast<int>(s), e.paths[s]);
    }
  }
  w.word("end").end();
}

inline Database load_database(std::istream& in) {
  detail::RecordReader r(in);
  r.header("EARC-DB", Database::kFormatVersion);
  Database db;
  r.expect_record("robots");
  const auto n_rob = r.count();
  r.done();
  for (long long i = 0; i < n_rob; ++i) db.robots.push_back(detail::read_robot(r));
  r.expect_record("delta");
  db.delta = r.num();
  r.done();
  r.expect_record("resolution");
  r.num();
  r.integer();
  r.done();
  r.expect_record("build_seconds");
  db.build_seconds = r.num();
  r.done();
  r.expect_record("next_id");
  db.next_id = static_cast<std::uint64_t>(r.count(static_cast<long long>(1) << 62));
  r.done();
  r.expect_record("entries");
  const auto n = r.count();
  r.done();
  for (long long i = 0; i < n; ++i) {
    r.expect_record("entry");
    ExperienceEntry e;
    e.id = static_cast<std::uint64_t>(r.count(static_cast<long long>(1) << 62));
    const auto kind = r.integer();
    if (kind < 0 || kind > 2) r.fail("unknown entry kind " + std::to_string(kind));
    e.key.kind = static_cast<TransformKey::Kind>(kind);
    e.key.robots = static_cast<int>(r.count(100000));
    for (auto& v : e.key.rel) v = static_cast<int>(r.integer());
    e.anchor.x = r.num();
    e.anchor.y = r.num();
    r.done();
    if (e.key.robots == 0) r.fail("entry without robots");
    for (int s = 0; s < e.key.robots; ++s) e.queries.push_back(detail::read_query(r, s));
    for (int s = 0; s < e.key.robots; ++s) e.paths.push_back(detail::read_path(r, s));
    if (e.id >= db.next_id) r.fail("entry id not below next_id");
    db.buckets[e.key].push_back(std::move(e));
  }
  r.expect_record("end");
  r.done();
  for (auto& [key, bucket] : db.buckets) {
    std::sort(bucket.begin(), bucket.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  }
  return db;
}

inline void save_database(const Database& db, const std::string& path) {
  detail::write_file(path, [&](std::ostream& out) { save_database(db, out); });
}

inline Database load_database(const std::string& path) {
  return detail::read_file(path, [](std::istream& in) { return load_database(in); });
}

// ---- scenarios -----------------------------------------------------------------

inline void save_problem(const Problem& p, std::ostream& out) {
  detail::RecordWriter w(out);
  w.word("EARC-SCENARIO").integer(1).end();
  detail::write_problem_body(w, p);
}

inline Problem load_problem(std::istream& in) {
  detail::RecordReader r(in);
  r.header("EARC-SCENARIO", 1);
  return detail::read_problem_body(r);
}

inline void save_problem(const Problem& p, const std::string& path) {
  detail::write_file(path, [&](std::ostream& out) { save_problem(p, out); });
}

inline Problem load_problem(const std::string& path) {
  return detail::read_file(path, [](std::istream& in) { return load_problem(in); });
}

// ---- traces --------------------------------------------------------------------

struct Trace {
  std::string method;
  Problem problem;
  Solution solution;
};

inline void save_trace(const Trace& t, std::ostream& out) {
  detail::RecordWriter w(out);
  w.word("EARC-TRACE").integer(1).end();
  w.word("method").word(t.method.empty() ? "unknown" : t.method).end();
  const Solution& s = t.solution;
  w.word("success").integer(s.success ? 1 : 0).end();
  w.word("planning_seconds").num(s.planning_seconds).end();
  out << "reason" << (s.failure_reason.empty() ? "" : " " + s.failure_reason) << '\n';
  const SolveStats& st = s.stats;
  w.word("stats").integer(st.conflicts_resolved).integer(st.expansions).integer(st.merges).integer(st.db_hits);
  w.integer(st.db_repairs).integer(st.db_misses).integer(st.decoupled).integer(st.coupled).end();
  detail::write_problem_body(w, t.problem);
  w.word("paths").integer(static_cast<long long>(s.paths.size())).end();
  for (std::size_t i = 0; i < s.paths.size(); ++i) detail::write_path(w, static_cast<int>(i), s.paths[i]);
  w.word("end").end();
}

inline Trace load_trace(std::istream& in) {
  detail::RecordReader r(in);
  r.header("EARC-TRACE", 1);
  Trace t;
  r.expect_record("method");
  t.method = r.word();
  r.done();
  r.expect_record("success");
  const auto ok = r.integer();
  if (ok != 0 && ok != 1) r.fail("success must be 0 or 1");
  t.solution.success = ok == 1;
  r.done();
  r.expect_record("planning_seconds");
  t.solution.planning_seconds = r.num();
  r.done();
  r.expect_record("reason");
  t.solution.failure_reason = r.rest_of_line();
  r.expect_record("stats");
  SolveStats& st = t.solution.stats;
  st.conflicts_resolved = static_cast<int>(r.count());
  st.expansions = static_cast<int>(r.count());
  st.merges = static_cast<int>(r.count());
  st.db_hits = static_cast<int>(r.count());
  st.db_repairs = static_cast<int>(r.count());
  st.db_misses = static_cast<int>(r.count());
  st.decoupled = static_cast<int>(r.count());
  st.coupled = static_cast<int>(r.count());
  r.done();
  t.problem = detail::read_problem_body(r);
  r.expect_record("paths");
  const auto n = r.count();
  r.done();
  for (long long i = 0; i < n; ++i) t.solution.paths.push_back(detail::read_path(r, static_cast<int>(i)));
  r.expect_record("end");
  r.done();
  return t;
}

inline void save_trace(const Trace& t, const std::string& path) {
  detail::write_file(path, [&](std::ostream& out) { save_trace(t, out); });
}

inline Trace load_trace(const std::string& path) {
  return detail::read_file(path, [](std::istream& in) { return load_trace(in); });
}

}  // namespace earc
