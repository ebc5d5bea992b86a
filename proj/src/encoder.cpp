#include "stlplan/encoder.hpp"

#include <stdexcept>

namespace stlplan {

PathVars make_path_vars(VarTable &vars, int agent, int K, const Workspace &ws,
                        double horizon) {
  if (K < 1)
    throw std::invalid_argument("make_path_vars: K must be >= 1");
  PathVars pv;
  pv.agent = agent;
  pv.K = K;
  pv.horizon = horizon;
  for (int k = 0; k <= K; ++k) {
    pv.t.push_back(vars.add_continuous(
        "t_" + std::to_string(agent) + "_" + std::to_string(k), 0.0, horizon));
    std::vector<int> pt;
    for (std::size_t ax = 0; ax < ws.dim; ++ax)
      pt.push_back(vars.add_continuous("p_" + std::to_string(agent) + "_" +
                                           std::to_string(k) + "_" +
                                           std::to_string(ax),
                                       ws.lo[ax], ws.hi[ax]));
    pv.p.push_back(std::move(pt));
  }
  return pv;
}

int overlap_lcf(LcfArena &arena, const LinearExpr &l1, const LinearExpr &u1,
                const LinearExpr &l2, const LinearExpr &u2) {
  return arena.and_({arena.leaf(u2 - l1), arena.leaf(u1 - l2)});
}

int nonoverlap_lcf(LcfArena &arena, const LinearExpr &l1, const LinearExpr &u1,
                   const LinearExpr &l2, const LinearExpr &u2) {
  return arena.or_({arena.leaf(l1 - u2), arena.leaf(l2 - u1)});
}

int encode_atomic(LcfArena &arena, const PathVars &path, int k,
                  const Polytope &poly, double eps) {
  if (poly.dim() != static_cast<std::size_t>(path.dim()))
    throw std::invalid_argument("encode_atomic: dimension mismatch");
  std::vector<int> faces;
  for (std::size_t j = 0; j < poly.num_faces(); ++j) {
    double rhs = poly.b()[j] - eps * poly.row_norms()[j];
    for (int end : {k, k + 1}) {
      LinearExpr e(rhs);
      for (std::size_t ax = 0; ax < poly.dim(); ++ax)
        e.add(path.p[end][ax], -poly.H()[j][ax]);
      faces.push_back(arena.leaf(e));
    }
  }
  return arena.and_(faces);
}

int encode_neg_atomic(LcfArena &arena, const PathVars &path, int k,
                      const Polytope &poly, double eps) {
  if (poly.dim() != static_cast<std::size_t>(path.dim()))
    throw std::invalid_argument("encode_neg_atomic: dimension mismatch");
  std::vector<int> faces;
  for (std::size_t j = 0; j < poly.num_faces(); ++j) {
    double rhs = -poly.b()[j] - eps * poly.row_norms()[j];
    std::vector<int> ends;
    for (int end : {k, k + 1}) {
      LinearExpr e(rhs);
      for (std::size_t ax = 0; ax < poly.dim(); ++ax)
        e.add(path.p[end][ax], poly.H()[j][ax]);
      ends.push_back(arena.leaf(e));
    }
    faces.push_back(arena.and_(ends));
  }
  return arena.or_(faces);
}

namespace {

class Encoder {
public:
  Encoder(LcfArena &arena, const PathVars &path, const RegionTable &regions,
          double eps, ZCache &cache)
      : arena_(arena), path_(path), regions_(regions), eps_(eps), cache_(cache) {}

  int z(const StlPtr &phi, int i) {
    auto key = std::make_tuple(path_.agent, to_string(phi), i);
    auto it = cache_.z.find(key);
    if (it != cache_.z.end())
      return it->second;
    int node = build(phi, i);
    cache_.z.emplace(std::move(key), node);
    return node;
  }

private:
  // Leaf t_q - t_r + c >= 0 over one agent's times. Index K stands for the
  // horizon constant T, not the variable t_K: the agent parks at its final
  // waypoint, so the last segment's interval is [t_{K-1}, T]. The waypoint
  // ordering (and 0 <= t_k <= T) decides many leaves, so they fold to
  // constants where possible (ties break toward False, which only
  // strengthens the encoding).
  int time_leaf(int q, int r, double c) {
    const int K = path_.K;
    const double T = path_.horizon;
    if (q == K && r == K)
      return c >= 0 ? LcfArena::kTrue : LcfArena::kFalse;
    if (q == K) { // T - t_r + c >= 0 with t_r <= T
      if (c >= 0)
        return LcfArena::kTrue;
      LinearExpr e(T + c);
      e.add(path_.t[r], -1.0);
      return arena_.leaf(e);
    }
    if (r == K) { // t_q - T + c >= 0 with 0 <= t_q <= T
      if (c <= 0)
        return LcfArena::kFalse;
      if (c >= T)
        return LcfArena::kTrue;
      LinearExpr e(c - T);
      e.add(path_.t[q], 1.0);
      return arena_.leaf(e);
    }
    if (q == r)
      return c >= 0 ? LcfArena::kTrue : LcfArena::kFalse;
    if (q > r && c >= 0)
      return LcfArena::kTrue;
    if (q < r && c <= 0)
      return LcfArena::kFalse;
    LinearExpr e(c);
    e.add(path_.t[q], 1.0);
    e.add(path_.t[r], -1.0);
    return arena_.leaf(e);
  }

  const Polytope &region(const std::string &name) const {
    auto it = regions_.find(name);
    if (it == regions_.end())
      throw std::invalid_argument("encode: unresolved region '" + name + "'");
    return it->second;
  }

  int build(const StlPtr &phi, int i) {
    const int K = path_.K;
    switch (phi->kind) {
    case StlKind::Atom:
      return encode_atomic(arena_, path_, i, region(phi->region), eps_);
    case StlKind::NegAtom:
      return encode_neg_atomic(arena_, path_, i, region(phi->region), eps_);
    case StlKind::Not:
      throw std::invalid_argument("encode: formula must be in NNF");
    case StlKind::And: {
      std::vector<int> cs;
      for (const auto &c : phi->children)
        cs.push_back(z(c, i));
      return arena_.and_(cs);
    }
    case StlKind::Or: {
      std::vector<int> cs;
      for (const auto &c : phi->children)
        cs.push_back(z(c, i));
      return arena_.or_(cs);
    }
    case StlKind::Always: {
      // [t_j, t_{j+1}] disjoint from [t_i+a, t_{i+1}+b], or phi holds there
      std::vector<int> cs;
      for (int j = 0; j < K; ++j) {
        int apart = arena_.or_(
            {time_leaf(j, i + 1, -phi->b), time_leaf(i, j + 1, phi->a)});
        cs.push_back(arena_.or_({apart, z(phi->children[0], j)}));
      }
      return arena_.and_(cs);
    }
    case StlKind::Eventually: {
      int guard = time_leaf(i, i + 1, phi->b - phi->a);
      std::vector<int> cs;
      for (int j = 0; j < K; ++j) {
        int meet = arena_.and_(
            {time_leaf(i, j, phi->b), time_leaf(j + 1, i + 1, -phi->a)});
        cs.push_back(arena_.and_({meet, z(phi->children[0], j)}));
      }
      return arena_.and_({guard, arena_.or_(cs)});
    }
    case StlKind::Until: {
      int guard = time_leaf(i, i + 1, phi->b - phi->a);
      std::vector<int> cs;
      for (int j = 0; j < K; ++j) {
        int meet = arena_.and_(
            {time_leaf(i, j, phi->b), time_leaf(j + 1, i + 1, -phi->a)});
        std::vector<int> conj{meet, z(phi->children[1], j)};
        for (int l = 0; l <= j; ++l) {
          // [t_l, t_{l+1}] disjoint from [t_i, t_{i+1}+b], or phi1 holds
          int apart = arena_.or_(
              {time_leaf(l, i + 1, -phi->b), time_leaf(i, l + 1, 0)});
          conj.push_back(arena_.or_({apart, z(phi->children[0], l)}));
        }
        cs.push_back(arena_.and_(conj));
      }
      return arena_.and_({guard, arena_.or_(cs)});
    }
    case StlKind::Release: {
      std::vector<int> cs;
      for (int j = 0; j < K; ++j) {
        int apart = arena_.or_(
            {time_leaf(j, i + 1, -phi->b), time_leaf(i, j + 1, phi->a)});
        std::vector<int> disj{apart, z(phi->children[1], j)};
        for (int l = 0; l < j; ++l) {
          // [t_l, t_{l+1}] meets [t_{i+1}, t_{i+1}+b] and phi1 holds there
          int meet = arena_.and_(
              {time_leaf(i + 1, l, phi->b), time_leaf(l + 1, i + 1, 0)});
          disj.push_back(arena_.and_({meet, z(phi->children[0], l)}));
        }
        cs.push_back(arena_.or_(disj));
      }
      return arena_.and_(cs);
    }
    }
    throw std::logic_error("encode: unknown node kind");
  }

  LcfArena &arena_;
  const PathVars &path_;
  const RegionTable &regions_;
  double eps_;
  ZCache &cache_;
};

// how far past t the formula can look (nested window ends accumulated)
double lookahead(const StlPtr &phi) {
  double nested = 0;
  for (const auto &c : phi->children)
    nested = std::max(nested, lookahead(c));
  switch (phi->kind) {
  case StlKind::Always:
  case StlKind::Eventually:
  case StlKind::Until:
  case StlKind::Release:
    return phi->b + nested;
  default:
    return nested;
  }
}

} // namespace

int encode(LcfArena &arena, const StlPtr &phi, const PathVars &path,
           const RegionTable &regions, double eps, ZCache &cache) {
  // satisfaction at t=0 needs the whole nested window inside [0, T]; the
  // monitor's domain ends at T, so anything looking further cannot hold
  if (lookahead(phi) > path.horizon + 1e-9)
    return LcfArena::kFalse;
  return Encoder(arena, path, regions, eps, cache).z(phi, 0);
}

int encode_ma(LcfArena &arena, const MaPtr &spec,
              const std::vector<PathVars> &paths, const RegionTable &regions,
              const std::vector<double> &eps_per_agent, ZCache &cache) {
  switch (spec->kind) {
  case MaKind::AgentAtom: {
    int idx = spec->agent - 1;
    if (idx < 0 || idx >= static_cast<int>(paths.size()))
      throw std::invalid_argument("encode_ma: missing path vars for agent " +
                                  std::to_string(spec->agent));
    double e = idx < static_cast<int>(eps_per_agent.size()) ? eps_per_agent[idx] : 0.0;
    return encode(arena, spec->phi, paths[idx], regions, e, cache);
  }
  case MaKind::And: {
    std::vector<int> cs;
    for (const auto &c : spec->children)
      cs.push_back(encode_ma(arena, c, paths, regions, eps_per_agent, cache));
    return arena.and_(cs);
  }
  case MaKind::Or: {
    std::vector<int> cs;
    for (const auto &c : spec->children)
      cs.push_back(encode_ma(arena, c, paths, regions, eps_per_agent, cache));
    return arena.or_(cs);
  }
  }
  throw std::logic_error("encode_ma: unknown node kind");
}

} // namespace stlplan
