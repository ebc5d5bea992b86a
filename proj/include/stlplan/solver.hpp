#pragma once

#include <limits>
#include <vector>

#include "stlplan/milp.hpp"

namespace stlplan {

struct LpResult {
  enum class Status { Optimal, Infeasible, Unbounded };
  Status status;
  double objective = 0;
  std::vector<double> x; // structural variables, model order
  long iterations = 0;
};

/// Two-phase dense primal simplex with bounded variables. Binaries are
/// relaxed to [0,1]. `lo_override` / `hi_override`, when non-null, replace
/// the model bounds (used by branch-and-bound to fix binaries).
LpResult solve_lp(const MilpModel &model,
                  const std::vector<double> *lo_override = nullptr,
                  const std::vector<double> *hi_override = nullptr);

struct MilpParams {
  double mip_gap = 1e-4;
  double time_limit_s = std::numeric_limits<double>::infinity();
  long node_limit = std::numeric_limits<long>::max();
};

struct MilpStats {
  long nodes = 0;
  long simplex_iterations = 0;
};

struct MilpResult {
  enum class Status { Optimal, Feasible, Infeasible, TimeLimit };
  Status status;
  double objective = 0;   // incumbent
  double best_bound = 0;  // lower bound (minimization)
  double gap = 0;         // (objective - best_bound) / max(1, |objective|)
  std::vector<double> x;  // incumbent assignment, empty if none
  MilpStats stats;
};

/// Best-bound branch-and-bound over the binary variables, with an initial
/// depth-first dive to find an incumbent early. Branches on the most
/// fractional binary; deterministic (ties broken by lowest id).
/// feas_tol = 1e-6, int_tol = 1e-6.
MilpResult solve_milp(const MilpModel &model, const MilpParams &params = {});

} // namespace stlplan
