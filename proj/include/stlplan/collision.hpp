#pragma once

#include <vector>

#include "stlplan/encoder.hpp"

namespace stlplan {

/// Auxiliary L_{i,k} >= ||(p_k - p_{k+1})/2||_1 for one agent's segments,
/// shared across all pair checks. `bounds` is an And of the 2^d sign-pattern
/// leaves L - sigma.(p_k - p_{k+1})/2 >= 0 per segment; conjoin it with the
/// rest of the model.
struct HalfLengths {
  std::vector<int> L; // one aux var per segment
  int bounds;         // Lcf id
};

HalfLengths make_half_lengths(LcfArena &arena, VarTable &vars,
                              const PathVars &path);

/// Segment pair is safe: time intervals disjoint, or 1-norm center distance
/// >= L_a + L_b + margin*sqrt(d) (via sign-pattern enumeration, exact for the
/// maximum over sigma).
int safe_lcf(LcfArena &arena, const PathVars &a, int seg_a, int La,
             const PathVars &b, int seg_b, int Lb, double margin);

/// And over agent pairs i<j and all segment pairs of safe_lcf with margin
/// eps_i + eps_j + s_i + s_j, plus the shared half-length bounds. True for
/// N = 1. Rejects d > 3 (the sign enumeration would explode).
int encode_inter_agent(LcfArena &arena, VarTable &vars,
                       const std::vector<PathVars> &paths,
                       const std::vector<double> &sizes,
                       const std::vector<double> &eps_per_agent);

inline int encode_inter_agent(LcfArena &arena, VarTable &vars,
                              const std::vector<PathVars> &paths,
                              const std::vector<double> &sizes, double eps) {
  return encode_inter_agent(arena, vars, paths, sizes,
                            std::vector<double>(paths.size(), eps));
}

} // namespace stlplan
