#pragma once

#include "helpers.hpp"
#include "stlplan/milp.hpp"

namespace stlplan::testing {

/// Random AND-OR DAG over `nv` continuous variables bounded by [lo, hi],
/// with at most `max_or` Or nodes. Nodes from `pool` are reused, so shared
/// subtrees occur naturally.
inline int random_dag(Rng &rng, LcfArena &arena, VarTable &vars, int nv,
                      double lo, double hi, int max_or) {
  for (int v = 0; v < nv; ++v)
    vars.add_continuous("v" + std::to_string(v), lo, hi);
  std::vector<int> pool;
  int nleaf = uniform_int(rng, 2, 6);
  for (int i = 0; i < nleaf; ++i) {
    LinearExpr e(static_cast<double>(uniform_int(rng, -3, 3)));
    for (int v = 0; v < nv; ++v)
      if (uniform_int(rng, 0, 1))
        e.add(v, static_cast<double>(uniform_int(rng, -2, 2)));
    pool.push_back(arena.leaf(e));
  }
  int ors = 0;
  int ops = uniform_int(rng, 1, 6);
  for (int i = 0; i < ops; ++i) {
    int nc = uniform_int(rng, 2, 3);
    std::vector<int> cs;
    for (int c = 0; c < nc; ++c)
      cs.push_back(pool[uniform_int(rng, 0, pool.size() - 1)]);
    bool use_or = ors < max_or && uniform_int(rng, 0, 1);
    if (use_or)
      ++ors;
    pool.push_back(use_or ? arena.or_(cs) : arena.and_(cs));
  }
  return pool.back();
}

/// Does any completion of the binaries satisfy every model constraint at the
/// given continuous point? Exhaustive over 2^binaries.
inline bool milp_feasible_somehow(const MilpModel &model,
                                  const std::vector<double> &cont) {
  std::vector<int> binaries;
  for (std::size_t i = 0; i < model.vars.size(); ++i)
    if (model.vars[i].kind == VarKind::Binary)
      binaries.push_back(static_cast<int>(i));
  std::vector<double> x(model.vars.size(), 0.0);
  for (std::size_t i = 0; i < cont.size(); ++i)
    x[i] = cont[i];
  const std::size_t n = binaries.size();
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    for (std::size_t b = 0; b < n; ++b)
      x[binaries[b]] = (mask >> b) & 1 ? 1.0 : 0.0;
    bool ok = true;
    for (const LinearExpr &c : model.constraints)
      if (c.eval(x) < -1e-9) {
        ok = false;
        break;
      }
    if (ok)
      return true;
  }
  return false;
}

} // namespace stlplan::testing
