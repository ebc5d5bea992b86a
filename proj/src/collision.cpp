#include "stlplan/collision.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stlplan {

namespace {

std::vector<std::vector<double>> sign_patterns(int d) {
  if (d > 3)
    throw std::invalid_argument(
        "collision encoding supports d <= 3 (2^d sign patterns); got d = " +
        std::to_string(d));
  std::vector<std::vector<double>> out;
  for (int mask = 0; mask < (1 << d); ++mask) {
    std::vector<double> sigma(d);
    for (int ax = 0; ax < d; ++ax)
      sigma[ax] = (mask >> ax) & 1 ? 1.0 : -1.0;
    out.push_back(std::move(sigma));
  }
  return out;
}

} // namespace

HalfLengths make_half_lengths(LcfArena &arena, VarTable &vars,
                              const PathVars &path) {
  const int d = path.dim();
  auto sigmas = sign_patterns(d);
  HalfLengths hl;
  std::vector<int> bound_leaves;
  for (int k = 0; k < path.K; ++k) {
    double hi = 0;
    for (int ax = 0; ax < d; ++ax) {
      // both endpoints bound the travel; a pinned start must not freeze L
      const VarInfo &v0 = vars[path.p[k][ax]];
      const VarInfo &v1 = vars[path.p[k + 1][ax]];
      hi += (std::max(v0.hi, v1.hi) - std::min(v0.lo, v1.lo)) / 2;
    }
    int L = vars.add_aux(0.0, hi);
    hl.L.push_back(L);
    for (const auto &sigma : sigmas) {
      LinearExpr e = LinearExpr::var(L);
      for (int ax = 0; ax < d; ++ax) {
        e.add(path.p[k][ax], -sigma[ax] / 2);
        e.add(path.p[k + 1][ax], sigma[ax] / 2);
      }
      bound_leaves.push_back(arena.leaf(e));
    }
  }
  hl.bounds = bound_leaves.empty() ? LcfArena::kTrue : arena.and_(bound_leaves);
  return hl;
}

int safe_lcf(LcfArena &arena, const PathVars &a, int seg_a, int La,
             const PathVars &b, int seg_b, int Lb, double margin) {
  const int d = a.dim();
  if (d != b.dim())
    throw std::invalid_argument("safe_lcf: dimension mismatch");
  // (i) time-disjoint; an agent parks at its final waypoint, so the last
  // segment occupies its end position until the horizon
  auto upper = [](const PathVars &pv, int seg) {
    return seg + 1 == pv.K ? LinearExpr(pv.horizon)
                           : LinearExpr::var(pv.t[seg + 1]);
  };
  LinearExpr l1 = LinearExpr::var(a.t[seg_a]);
  LinearExpr u1 = upper(a, seg_a);
  LinearExpr l2 = LinearExpr::var(b.t[seg_b]);
  LinearExpr u2 = upper(b, seg_b);
  int time_apart = nonoverlap_lcf(arena, l1, u1, l2, u2);
  // (ii) 1-norm center distance >= La + Lb + margin*sqrt(d)
  std::vector<int> disj{time_apart};
  for (const auto &sigma : sign_patterns(d)) {
    LinearExpr e(-margin * std::sqrt(static_cast<double>(d)));
    e.add(La, -1.0);
    e.add(Lb, -1.0);
    for (int ax = 0; ax < d; ++ax) {
      e.add(a.p[seg_a][ax], sigma[ax] / 2);
      e.add(a.p[seg_a + 1][ax], sigma[ax] / 2);
      e.add(b.p[seg_b][ax], -sigma[ax] / 2);
      e.add(b.p[seg_b + 1][ax], -sigma[ax] / 2);
    }
    disj.push_back(arena.leaf(e));
  }
  return arena.or_(disj);
}

int encode_inter_agent(LcfArena &arena, VarTable &vars,
                       const std::vector<PathVars> &paths,
                       const std::vector<double> &sizes,
                       const std::vector<double> &eps_per_agent) {
  const int n = static_cast<int>(paths.size());
  if (n <= 1)
    return LcfArena::kTrue;
  if (static_cast<int>(sizes.size()) != n ||
      static_cast<int>(eps_per_agent.size()) != n)
    throw std::invalid_argument(
        "encode_inter_agent: one size and one eps per agent required");
  std::vector<HalfLengths> hl;
  std::vector<int> conj;
  for (const auto &pv : paths) {
    hl.push_back(make_half_lengths(arena, vars, pv));
    conj.push_back(hl.back().bounds);
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double margin = eps_per_agent[i] + eps_per_agent[j] + sizes[i] + sizes[j];
      for (int k = 0; k < paths[i].K; ++k)
        for (int l = 0; l < paths[j].K; ++l)
          conj.push_back(safe_lcf(arena, paths[i], k, hl[i].L[k], paths[j], l,
                                  hl[j].L[l], margin));
    }
  return arena.and_(conj);
}

} // namespace stlplan
