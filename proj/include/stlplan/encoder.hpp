#pragma once

#include <map>
#include <tuple>
#include <vector>

#include "stlplan/lcf.hpp"
#include "stlplan/spec.hpp"

namespace stlplan {

/// Decision variables of one agent's K-segment PWL path: times t_0..t_K and
/// d-dimensional waypoints p_0..p_K.
struct PathVars {
  int agent = 1; // 1-based
  int K = 0;
  double horizon = 0;              // T; the last segment extends to it
  std::vector<int> t;              // K+1 time var ids
  std::vector<std::vector<int>> p; // (K+1) x d position var ids

  int dim() const { return p.empty() ? 0 : static_cast<int>(p.front().size()); }
};

/// Declare t_{agent}_{k} in [0, T] and p_{agent}_{k}_{axis} within the
/// workspace box.
PathVars make_path_vars(VarTable &vars, int agent, int K, const Workspace &ws,
                        double horizon);

/// Memoized z-formulas, one per (agent, formula, segment). Formulas are keyed
/// by their printed form, so structurally equal subformulas share entries.
struct ZCache {
  std::map<std::tuple<int, std::string, int>, int> z;
};

/// overlap  = And(u2-l1 >= 0, u1-l2 >= 0)
/// nonoverlap = Or(l1-u2 >= 0, l2-u1 >= 0)
/// for closed intervals [l1,u1], [l2,u2] given as affine expressions.
int overlap_lcf(LcfArena &arena, const LinearExpr &l1, const LinearExpr &u1,
                const LinearExpr &l2, const LinearExpr &u2);
int nonoverlap_lcf(LcfArena &arena, const LinearExpr &l1, const LinearExpr &u1,
                   const LinearExpr &l2, const LinearExpr &u2);

/// Segment k fully inside the eps-shrunk polytope: both endpoints satisfy
/// every face with margin eps*||H^(j)||.
int encode_atomic(LcfArena &arena, const PathVars &path, int k,
                  const Polytope &poly, double eps);

/// Segment k fully outside the eps-bloated polytope: both endpoints beyond
/// one common face.
int encode_neg_atomic(LcfArena &arena, const PathVars &path, int k,
                      const Polytope &poly, double eps);

/// Build z_0^phi for an NNF formula over the given path variables. All
/// intermediate z_i^psi land in the cache. Time-difference leaves that are
/// decided by the waypoint ordering t_0 <= ... <= t_K fold to True/False.
/// The path is treated as holding its last position until the horizon, so
/// the final segment's time interval ends at T rather than t_K; formulas
/// whose nested windows reach past the horizon encode to False (the
/// monitor's satisfaction domain ends at T).
int encode(LcfArena &arena, const StlPtr &phi, const PathVars &path,
           const RegionTable &regions, double eps, ZCache &cache);

/// Multi-agent encoding: AgentAtom(i, phi) becomes encode(phi, paths[i-1]);
/// the And/Or shape is preserved.
int encode_ma(LcfArena &arena, const MaPtr &spec,
              const std::vector<PathVars> &paths, const RegionTable &regions,
              const std::vector<double> &eps_per_agent, ZCache &cache);

} // namespace stlplan
