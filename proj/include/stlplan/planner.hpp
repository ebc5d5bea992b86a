#pragma once

#include <string>
#include <vector>

#include "stlplan/collision.hpp"
#include "stlplan/encoder.hpp"
#include "stlplan/path.hpp"
#include "stlplan/solver.hpp"

namespace stlplan {

enum class Objective { TotalTravelTime, Makespan };

struct AgentSpec {
  Vec init;
  double size = 0.1;
  double eps = 0.0;
};

struct Problem {
  Workspace workspace;
  RegionTable regions;
  std::vector<AgentSpec> agents;
  MaPtr spec;
  double T = 0;
  double vmax = 0;
  Objective objective = Objective::TotalTravelTime;
  int K0 = 1;
  int Kmax = 8;

  /// Throws on violated invariants: initial positions inside the workspace,
  /// sizes > 0, eps >= 0, T > 0, vmax > 0, 1 <= K0 <= Kmax.
  void validate() const;
};

struct BuiltModel {
  MilpModel model;
  std::vector<PathVars> paths;
};

/// Assemble the complete model for a common segment count K: path variables,
/// structural constraints (t_{i,0} = 0 and p_{i,0} fixed via bounds, time
/// monotonicity, sign-enumerated velocity bound), the task and inter-agent
/// LCFs big-M eliminated, and the objective.
BuiltModel build_model(const Problem &problem, int K);

enum class PlanStatus { Solved, Infeasible, TimeLimit, Exported };

struct PlanResult {
  PlanStatus status = PlanStatus::Infeasible;
  int K = 0; // K used on success; last K tried otherwise
  double objective = 0;
  std::vector<PwlPath> paths;
  MilpStats stats;       // summed over all K tried
  double best_bound = 0; // from the last solve
  double gap = 0;
};

struct Backend {
  enum class Kind { Builtin, LpFile };
  Kind kind = Kind::Builtin;
  std::string lp_path; // LpFile: destination for the exported model (at K0)
};

/// Outer search loop: K = K0, K0+1, ..., Kmax; build + solve; stop at the
/// first feasible K. The LpFile backend writes the K0 model and returns
/// Exported without solving.
PlanResult plan(const Problem &problem, const MilpParams &params = {},
                const Backend &backend = {});

/// Read the waypoints out of a solver assignment. Durations in [-1e-9, 0]
/// are snapped to zero (solver noise); anything more negative is an error.
std::vector<PwlPath> extract_paths(const std::vector<double> &x,
                                   const std::vector<PathVars> &paths);

} // namespace stlplan
