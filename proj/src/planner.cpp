#include "stlplan/planner.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace stlplan {

void Problem::validate() const {
  if (workspace.dim == 0)
    throw std::invalid_argument("Problem: workspace dimension must be positive");
  if (agents.empty())
    throw std::invalid_argument("Problem: at least one agent required");
  if (!spec)
    throw std::invalid_argument("Problem: missing spec");
  if (!(T > 0))
    throw std::invalid_argument("Problem: T must be positive");
  if (!(vmax > 0))
    throw std::invalid_argument("Problem: vmax must be positive");
  if (K0 < 1 || K0 > Kmax)
    throw std::invalid_argument("Problem: need 1 <= K0 <= Kmax");
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const AgentSpec &a = agents[i];
    const std::string who = "agent " + std::to_string(i + 1);
    if (a.init.size() != workspace.dim)
      throw std::invalid_argument("Problem: " + who +
                                  " initial position has wrong dimension");
    for (std::size_t ax = 0; ax < workspace.dim; ++ax)
      if (a.init[ax] < workspace.lo[ax] || a.init[ax] > workspace.hi[ax])
        throw std::invalid_argument("Problem: " + who +
                                    " starts outside the workspace");
    if (!(a.size > 0))
      throw std::invalid_argument("Problem: " + who + " size must be positive");
    if (a.eps < 0)
      throw std::invalid_argument("Problem: " + who + " eps must be >= 0");
  }
}

BuiltModel build_model(const Problem &problem, int K) {
  problem.validate();
  if (K < 1)
    throw std::invalid_argument("build_model: K must be >= 1");
  const std::size_t d = problem.workspace.dim;

  BuiltModel out;
  MilpModel &model = out.model;
  std::vector<double> sizes, eps;
  for (std::size_t i = 0; i < problem.agents.size(); ++i) {
    PathVars pv = make_path_vars(model.vars, static_cast<int>(i) + 1, K,
                                 problem.workspace, problem.T);
    // pin the start: t_0 = 0, p_0 = init, via bounds
    model.vars.set_bounds(pv.t[0], 0.0, 0.0);
    for (std::size_t ax = 0; ax < d; ++ax)
      model.vars.set_bounds(pv.p[0][ax], problem.agents[i].init[ax],
                            problem.agents[i].init[ax]);
    out.paths.push_back(std::move(pv));
    sizes.push_back(problem.agents[i].size);
    eps.push_back(problem.agents[i].eps);
  }

  for (const PathVars &pv : out.paths) {
    for (int k = 0; k < K; ++k) {
      LinearExpr mono;
      mono.add(pv.t[k + 1], 1.0).add(pv.t[k], -1.0);
      model.constraints.push_back(mono);
      // ||p_{k+1} - p_k||_1 <= vmax (t_{k+1} - t_k), sign-enumerated
      for (int mask = 0; mask < (1 << d); ++mask) {
        LinearExpr v;
        v.add(pv.t[k + 1], problem.vmax).add(pv.t[k], -problem.vmax);
        for (std::size_t ax = 0; ax < d; ++ax) {
          double sigma = (mask >> ax) & 1 ? 1.0 : -1.0;
          v.add(pv.p[k + 1][ax], -sigma).add(pv.p[k][ax], sigma);
        }
        model.constraints.push_back(v);
      }
    }
  }

  LcfArena arena;
  ZCache cache;
  int z_spec = encode_ma(arena, problem.spec, out.paths, problem.regions, eps, cache);
  int z_inter = encode_inter_agent(arena, model.vars, out.paths, sizes, eps);
  int root = arena.and_({z_spec, z_inter});
  eliminate_disjunctions(arena, root, model);

  if (problem.objective == Objective::TotalTravelTime) {
    for (const PathVars &pv : out.paths)
      model.objective.add(pv.t[K], 1.0);
  } else {
    int makespan = model.vars.add_aux(0.0, problem.T);
    for (const PathVars &pv : out.paths) {
      LinearExpr c = LinearExpr::var(makespan);
      c.add(pv.t[K], -1.0);
      model.constraints.push_back(c);
    }
    model.objective = LinearExpr::var(makespan);
  }
  return out;
}

std::vector<PwlPath> extract_paths(const std::vector<double> &x,
                                   const std::vector<PathVars> &paths) {
  std::vector<PwlPath> out;
  for (const PathVars &pv : paths) {
    PwlPath path;
    for (int k = 0; k <= pv.K; ++k) {
      if (pv.t[k] >= static_cast<int>(x.size()))
        throw std::invalid_argument("extract_paths: assignment too short");
      path.t.push_back(x[pv.t[k]]);
      Vec pt;
      for (int v : pv.p[k]) {
        if (v >= static_cast<int>(x.size()))
          throw std::invalid_argument("extract_paths: assignment too short");
        pt.push_back(x[v]);
      }
      path.p.push_back(std::move(pt));
    }
    if (std::abs(path.t[0]) > 1e-9)
      throw std::invalid_argument("extract_paths: t_0 not zero");
    path.t[0] = 0.0;
    for (std::size_t k = 0; k + 1 < path.t.size(); ++k) {
      double dur = path.t[k + 1] - path.t[k];
      if (dur < -1e-9)
        throw std::invalid_argument("extract_paths: negative duration " +
                                    std::to_string(dur));
      if (dur < 0)
        path.t[k + 1] = path.t[k];
    }
    path.validate();
    out.push_back(std::move(path));
  }
  return out;
}

PlanResult plan(const Problem &problem, const MilpParams &params,
                const Backend &backend) {
  problem.validate();
  PlanResult res;

  if (backend.kind == Backend::Kind::LpFile) {
    BuiltModel built = build_model(problem, problem.K0);
    std::ofstream out(backend.lp_path);
    if (!out)
      throw std::runtime_error("plan: cannot write " + backend.lp_path);
    out << export_lp(built.model);
    res.status = PlanStatus::Exported;
    res.K = problem.K0;
    return res;
  }

  const auto start = std::chrono::steady_clock::now();
  for (int K = problem.K0; K <= problem.Kmax; ++K) {
    res.K = K;
    BuiltModel built = build_model(problem, K);
    MilpParams p = params;
    if (std::isfinite(params.time_limit_s)) {
      double elapsed = std::chrono::duration<double>(
                           std::chrono::steady_clock::now() - start)
                           .count();
      p.time_limit_s = params.time_limit_s - elapsed;
      if (p.time_limit_s <= 0) {
        res.status = PlanStatus::TimeLimit;
        return res;
      }
    }
    MilpResult mr = solve_milp(built.model, p);
    res.stats.nodes += mr.stats.nodes;
    res.stats.simplex_iterations += mr.stats.simplex_iterations;
    res.best_bound = mr.best_bound;
    res.gap = mr.gap;
    switch (mr.status) {
    case MilpResult::Status::Optimal:
    case MilpResult::Status::Feasible:
      res.status = PlanStatus::Solved;
      res.objective = mr.objective;
      res.paths = extract_paths(mr.x, built.paths);
      return res;
    case MilpResult::Status::Infeasible:
      break; // try a larger K
    case MilpResult::Status::TimeLimit:
      res.status = PlanStatus::TimeLimit;
      return res;
    }
  }
  res.status = PlanStatus::Infeasible;
  return res;
}

} // namespace stlplan
