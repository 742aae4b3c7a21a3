#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "earc/cspace.hpp"

namespace earc {

struct Query {
  Configuration start;
  Configuration goal;

  friend bool operator==(const Query&, const Query&) = default;
};

/// A multi-robot motion planning instance: environment, robots, one query per robot.
struct Problem {
  Environment env;
  std::vector<RobotModel> robots;
  std::vector<Query> queries;

  std::size_t size() const { return robots.size(); }

  /// Throws std::invalid_argument if an endpoint is invalid or two starts
  /// (or two goals) overlap under `checks`.
  void validate(const CheckSettings& checks = CheckSettings::exact()) const {
    env.validate();
    if (robots.size() != queries.size()) throw std::invalid_argument("one query per robot required");
    CompositeConfiguration starts, goals;
    for (std::size_t i = 0; i < robots.size(); ++i) {
      const auto& q = queries[i];
      if (q.start.dof != robots[i].dof() || q.goal.dof != robots[i].dof()) {
        throw std::invalid_argument("query " + std::to_string(i) + " has wrong DOF");
      }
      if (q.start.robot_index != static_cast<int>(i) || q.goal.robot_index != static_cast<int>(i)) {
        throw std::invalid_argument("query " + std::to_string(i) + " carries a wrong robot index");
      }
      starts.push_back(q.start);
      goals.push_back(q.goal);
    }
    if (!composite_config_valid(starts, robots, env, checks)) {
      throw std::invalid_argument("start configurations collide");
    }
    if (!composite_config_valid(goals, robots, env, checks)) {
      throw std::invalid_argument("goal configurations collide");
    }
  }
};

}  // namespace earc
