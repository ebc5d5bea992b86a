#pragma once

#include <string>
#include <vector>

#include "stlplan/monitor.hpp"
#include "stlplan/planner.hpp"

namespace stlplan {

struct Scenario {
  Problem problem;
  MilpParams solver;
  Backend backend;
};

/// Parse scenario JSON. Errors carry the JSON field path
/// (e.g. "agents[1].init").
Scenario parse_scenario(const std::string &json_text);
Scenario load_scenario(const std::string &path);

std::string solution_to_json(const PlanResult &result);

struct Solution {
  std::string status;
  int K = 0;
  double objective = 0;
  std::vector<PwlPath> paths; // index = agent - 1
};

Solution parse_solution(const std::string &json_text);
Solution load_solution(const std::string &path);

struct ClearanceReport {
  int agent_i, agent_j; // 1-based
  double time, distance, required;
  bool ok;
};

struct FullReport {
  bool satisfied;          // spec and clearances
  CheckReport spec_report; // monitor output
  std::vector<ClearanceReport> clearances;
};

/// Monitor the solution paths against the scenario: STL satisfaction at each
/// agent's eps plus pairwise clearance >= s_i + s_j + eps_i + eps_j.
FullReport check_solution(const Scenario &scenario, const Solution &solution);

std::string report_to_json(const FullReport &report);

/// SVG: workspace frame, one polygon per region, one polyline per agent
/// path. 2D scenarios only.
std::string plot_svg(const Scenario &scenario, const std::vector<PwlPath> &paths);

} // namespace stlplan
