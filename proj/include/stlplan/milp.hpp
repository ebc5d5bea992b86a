#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "stlplan/lcf.hpp"

namespace stlplan {

/// Mixed-integer linear model: every constraint reads "expr >= 0".
/// Variables (with bounds and kinds) live in `vars`; binaries introduced by
/// disjunction elimination are appended there as z_{n}.
struct MilpModel {
  VarTable vars;
  std::vector<LinearExpr> constraints;
  LinearExpr objective; // minimized
  int binaries_added = 0;
  double max_big_m = 0;
};

/// Big-M for one leaf: max(0, -min of expr over the variable box) + 1,
/// by interval arithmetic. Throws if a referenced continuous variable is
/// unbounded in the direction that matters.
double choose_big_m(const LinearExpr &expr, const VarTable &vars);

/// Convert the AND-OR DAG rooted at `root` into conjunctive constraints on
/// `model`, introducing binaries for Or children (sum z >= 1 per Or).
/// Nested And/Or children are gated: their leaves pick up a (1-z)*M term per
/// enclosing Or choice. Subtrees referenced more than once get a single
/// indicator binary and are emitted once.
///
/// Sound and complete: for fixed continuous values, a feasible binary
/// completion exists iff the LCF evaluates true.
void eliminate_disjunctions(const LcfArena &arena, int root, MilpModel &model);

struct Feasibility {
  bool feasible;
  double worst_violation;
  std::string worst_constraint; // description of the most violated row
};

Feasibility check_feasible(const MilpModel &model, const std::vector<double> &x,
                           double tol = 1e-6);

/// CPLEX LP text (Minimize / Subject To / Bounds / Binaries / End),
/// deterministic, coefficients at 17 significant digits.
std::string export_lp(const MilpModel &model);

/// Parse "name value" lines ('#' comments allowed) into a full assignment,
/// then validate it against the model within `tol`. Throws on parse failure,
/// unknown or missing variables, or infeasibility (message names the worst
/// violated constraint).
std::vector<double> import_solution(const std::string &text, const MilpModel &model,
                                    double tol = 1e-6);

} // namespace stlplan
