#include "stlplan/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace stlplan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDualTol = 1e-9;
constexpr double kPivotTol = 1e-9;
constexpr double kPhase1Tol = 1e-7;
constexpr long kMaxIterations = 500000;
constexpr long kBlandThreshold = 2000;

enum class ColState : char { Basic, AtLower, AtUpper };

/// Dense tableau simplex over "A x >= b" rows with per-variable bounds.
/// Internally each row carries a slack (a.x - s = b, s >= 0) and, where the
/// all-at-lower-bound start violates it, an artificial minimized in phase 1.
class Simplex {
public:
  Simplex(const MilpModel &model, const std::vector<double> *lo_override,
          const std::vector<double> *hi_override) {
    n_ = static_cast<int>(model.vars.size());
    m_ = static_cast<int>(model.constraints.size());
    ncols_ = n_ + m_; // artificials appended below
    lo_.resize(ncols_);
    hi_.resize(ncols_);
    for (int j = 0; j < n_; ++j) {
      lo_[j] = lo_override ? (*lo_override)[j] : model.vars[j].lo;
      hi_[j] = hi_override ? (*hi_override)[j] : model.vars[j].hi;
      if (lo_[j] > hi_[j] + 1e-12)
        empty_box_ = true;
    }
    for (int i = 0; i < m_; ++i) {
      lo_[n_ + i] = 0;
      hi_[n_ + i] = kInf;
    }
    rows_.assign(m_, std::vector<double>(ncols_, 0.0));
    rhs_.resize(m_);
    for (int i = 0; i < m_; ++i) {
      const LinearExpr &e = model.constraints[i];
      for (auto [id, c] : e.terms)
        rows_[i][id] = c;
      rows_[i][n_ + i] = -1.0;
      rhs_[i] = -e.constant;
    }
    cost_.assign(ncols_, 0.0);
    for (auto [id, c] : model.objective.terms)
      cost_[id] = c;
  }

  LpResult run() {
    LpResult result;
    if (empty_box_) {
      result.status = LpResult::Status::Infeasible;
      return result;
    }
    init_basis();
    if (num_artificial_ > 0) {
      std::vector<double> phase1(ncols_, 0.0);
      for (int j = n_ + m_; j < ncols_; ++j)
        phase1[j] = 1.0;
      double obj = optimize(phase1, nullptr);
      if (obj > kPhase1Tol) {
        result.status = LpResult::Status::Infeasible;
        result.iterations = iterations_;
        return result;
      }
      for (int j = n_ + m_; j < ncols_; ++j) {
        lo_[j] = hi_[j] = 0.0;
        if (state_[j] != ColState::Basic)
          xval_[j] = 0.0;
      }
    }
    bool unbounded = false;
    double obj = optimize(cost_, &unbounded);
    result.iterations = iterations_;
    if (unbounded) {
      result.status = LpResult::Status::Unbounded;
      return result;
    }
    result.status = LpResult::Status::Optimal;
    result.objective = obj;
    result.x.assign(xval_.begin(), xval_.begin() + n_);
    for (int j = 0; j < n_; ++j)
      result.x[j] = std::clamp(result.x[j], lo_[j], hi_[j]);
    return result;
  }

private:
  void init_basis() {
    state_.assign(ncols_, ColState::AtLower);
    xval_.assign(ncols_, 0.0);
    for (int j = 0; j < n_; ++j) {
      if (std::isinf(lo_[j])) {
        state_[j] = ColState::AtUpper;
        xval_[j] = hi_[j];
        if (std::isinf(hi_[j]))
          throw std::runtime_error("solve_lp: free variable without bounds");
      } else {
        xval_[j] = lo_[j];
      }
    }
    basis_.resize(m_);
    std::vector<int> needs_artificial;
    for (int i = 0; i < m_; ++i) {
      double ax = 0;
      for (int j = 0; j < n_; ++j)
        ax += rows_[i][j] * xval_[j];
      double slack_val = ax - rhs_[i]; // s_i = a.x - b
      if (slack_val >= 0) {
        // slack basic; flip the row so the basis coefficient is +1
        for (double &v : rows_[i])
          v = -v;
        rhs_[i] = -rhs_[i];
        basis_[i] = n_ + i;
        state_[n_ + i] = ColState::Basic;
        xval_[n_ + i] = slack_val;
      } else {
        needs_artificial.push_back(i);
      }
    }
    num_artificial_ = static_cast<int>(needs_artificial.size());
    if (num_artificial_ > 0) {
      int old_ncols = ncols_;
      ncols_ += num_artificial_;
      lo_.resize(ncols_, 0.0);
      hi_.resize(ncols_, kInf);
      xval_.resize(ncols_, 0.0);
      state_.resize(ncols_, ColState::AtLower);
      cost_.resize(ncols_, 0.0);
      for (auto &row : rows_)
        row.resize(ncols_, 0.0);
      for (int k = 0; k < num_artificial_; ++k) {
        int i = needs_artificial[k];
        int col = old_ncols + k;
        rows_[i][col] = 1.0;
        basis_[i] = col;
        state_[col] = ColState::Basic;
        double ax = 0;
        for (int j = 0; j < n_; ++j)
          ax += rows_[i][j] * xval_[j];
        xval_[col] = rhs_[i] - ax; // > 0 by construction
      }
    }
  }

  void compute_reduced_costs(const std::vector<double> &c) {
    objrow_.assign(ncols_, 0.0);
    for (int j = 0; j < ncols_; ++j)
      objrow_[j] = c[j];
    for (int i = 0; i < m_; ++i) {
      double cb = c[basis_[i]];
      if (cb == 0)
        continue;
      const std::vector<double> &row = rows_[i];
      for (int j = 0; j < ncols_; ++j)
        objrow_[j] -= cb * row[j];
    }
  }

  void recompute_basics() {
    for (int i = 0; i < m_; ++i) {
      double v = rhs_[i];
      const std::vector<double> &row = rows_[i];
      for (int j = 0; j < ncols_; ++j)
        if (state_[j] != ColState::Basic && row[j] != 0 && xval_[j] != 0)
          v -= row[j] * xval_[j];
      xval_[basis_[i]] = v;
    }
  }

  double objective_value(const std::vector<double> &c) const {
    double s = 0;
    for (int j = 0; j < ncols_; ++j)
      if (c[j] != 0)
        s += c[j] * xval_[j];
    return s;
  }

  // Returns the optimal objective; sets *unbounded instead when the phase-2
  // objective is unbounded below.
  double optimize(const std::vector<double> &c, bool *unbounded) {
    compute_reduced_costs(c);
    recompute_basics();
    long stall = 0;
    bool bland = false;
    long local_iter = 0;
    for (;;) {
      if (++iterations_ > kMaxIterations)
        throw std::runtime_error("simplex: iteration limit exceeded");
      if (++local_iter % 256 == 0) {
        compute_reduced_costs(c);
        recompute_basics();
      }
      // entering column
      int enter = -1;
      double best = 0;
      for (int j = 0; j < ncols_; ++j) {
        if (state_[j] == ColState::Basic || lo_[j] == hi_[j])
          continue;
        double d = objrow_[j];
        bool eligible = (state_[j] == ColState::AtLower && d < -kDualTol) ||
                        (state_[j] == ColState::AtUpper && d > kDualTol);
        if (!eligible)
          continue;
        if (bland) {
          enter = j;
          break;
        }
        if (std::fabs(d) > best) {
          best = std::fabs(d);
          enter = j;
        }
      }
      if (enter < 0)
        return objective_value(c);

      const double dir = state_[enter] == ColState::AtLower ? 1.0 : -1.0;
      // ratio test: largest step t >= 0 keeping everything in bounds
      double tmax = hi_[enter] - lo_[enter]; // may be inf
      int leave_row = -1;
      bool leave_to_upper = false;
      for (int i = 0; i < m_; ++i) {
        double w = rows_[i][enter];
        if (std::fabs(w) < kPivotTol)
          continue;
        int bcol = basis_[i];
        double rate = -dir * w; // d(x_basic)/dt
        double limit;
        bool to_upper;
        if (rate > 0) {
          if (std::isinf(hi_[bcol]))
            continue;
          limit = (hi_[bcol] - xval_[bcol]) / rate;
          to_upper = true;
        } else {
          if (std::isinf(lo_[bcol]))
            continue;
          limit = (xval_[bcol] - lo_[bcol]) / (-rate);
          to_upper = false;
        }
        if (limit < -1e-9)
          limit = 0; // numerical noise on a bound
        limit = std::max(limit, 0.0);
        bool better;
        if (limit < tmax - 1e-12) {
          better = true;
        } else if (limit < tmax + 1e-12 && leave_row >= 0) {
          // tie-break: Bland by smallest basis index, else largest pivot
          better = bland ? bcol < basis_[leave_row]
                         : std::fabs(w) > std::fabs(rows_[leave_row][enter]);
        } else {
          better = false;
        }
        if (better) {
          tmax = limit;
          leave_row = i;
          leave_to_upper = to_upper;
        }
      }
      if (std::isinf(tmax)) {
        if (unbounded) {
          *unbounded = true;
          return 0;
        }
        throw std::runtime_error("simplex: unbounded phase-1 subproblem");
      }
      if (tmax <= 1e-12) {
        if (++stall > kBlandThreshold)
          bland = true;
      } else {
        stall = 0;
      }
      if (leave_row < 0) {
        // bound flip of the entering variable
        double t = tmax;
        for (int i = 0; i < m_; ++i) {
          double w = rows_[i][enter];
          if (w != 0)
            xval_[basis_[i]] -= dir * t * w;
        }
        xval_[enter] = dir > 0 ? hi_[enter] : lo_[enter];
        state_[enter] = dir > 0 ? ColState::AtUpper : ColState::AtLower;
        continue;
      }
      // pivot: entering enters the basis at row leave_row
      double t = tmax;
      for (int i = 0; i < m_; ++i) {
        double w = rows_[i][enter];
        if (w != 0 && i != leave_row)
          xval_[basis_[i]] -= dir * t * w;
      }
      xval_[enter] = xval_[enter] + dir * t;
      int leaving = basis_[leave_row];
      xval_[leaving] = leave_to_upper ? hi_[leaving] : lo_[leaving];
      state_[leaving] = leave_to_upper ? ColState::AtUpper : ColState::AtLower;
      state_[enter] = ColState::Basic;
      basis_[leave_row] = enter;

      std::vector<double> &prow = rows_[leave_row];
      const double piv = prow[enter];
      for (double &v : prow)
        v /= piv;
      rhs_[leave_row] /= piv;
      for (int i = 0; i < m_; ++i) {
        if (i == leave_row)
          continue;
        double f = rows_[i][enter];
        if (f == 0)
          continue;
        std::vector<double> &row = rows_[i];
        for (int j = 0; j < ncols_; ++j)
          row[j] -= f * prow[j];
        row[enter] = 0;
        rhs_[i] -= f * rhs_[leave_row];
      }
      double f = objrow_[enter];
      if (f != 0) {
        for (int j = 0; j < ncols_; ++j)
          objrow_[j] -= f * prow[j];
        objrow_[enter] = 0;
      }
    }
  }

  int n_ = 0, m_ = 0, ncols_ = 0;
  int num_artificial_ = 0;
  bool empty_box_ = false;
  std::vector<std::vector<double>> rows_;
  std::vector<double> rhs_;
  std::vector<double> lo_, hi_, cost_, objrow_, xval_;
  std::vector<int> basis_;
  std::vector<ColState> state_;
  long iterations_ = 0;
};

} // namespace

LpResult solve_lp(const MilpModel &model, const std::vector<double> *lo_override,
                  const std::vector<double> *hi_override) {
  return Simplex(model, lo_override, hi_override).run();
}

namespace {

constexpr double kIntTol = 1e-6;

int most_fractional_binary(const MilpModel &model, const std::vector<double> &x) {
  int best = -1;
  double best_frac = kIntTol;
  for (std::size_t j = 0; j < model.vars.size(); ++j) {
    if (model.vars[static_cast<int>(j)].kind != VarKind::Binary)
      continue;
    double f = std::min(x[j], 1.0 - x[j]);
    if (f > best_frac) {
      best_frac = f;
      best = static_cast<int>(j);
    }
  }
  return best; // -1: integral
}

struct BnbNode {
  double bound;
  int depth;
  long id;
  std::vector<std::pair<int, int>> fixes; // (binary var, 0/1)
  std::vector<double> x;                  // LP solution at this node
};

struct NodeOrder {
  bool operator()(const BnbNode &a, const BnbNode &b) const {
    if (a.bound != b.bound)
      return a.bound > b.bound; // min-heap on bound
    if (a.depth != b.depth)
      return a.depth < b.depth; // prefer deeper on ties
    return a.id > b.id;
  }
};

} // namespace

MilpResult solve_milp(const MilpModel &model, const MilpParams &params) {
  using Clock = std::chrono::steady_clock;
  const auto t_start = Clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(Clock::now() - t_start).count();
  };

  MilpResult result;
  result.best_bound = -kInf;
  const int nvars = static_cast<int>(model.vars.size());
  std::vector<double> base_lo(nvars), base_hi(nvars);
  for (int j = 0; j < nvars; ++j) {
    base_lo[j] = model.vars[j].lo;
    base_hi[j] = model.vars[j].hi;
  }

  double incumbent_obj = kInf;
  std::vector<double> incumbent_x;
  long next_id = 0;

  auto solve_node = [&](const std::vector<std::pair<int, int>> &fixes,
                        BnbNode &out) -> LpResult::Status {
    std::vector<double> lo = base_lo, hi = base_hi;
    for (auto [var, val] : fixes)
      lo[var] = hi[var] = static_cast<double>(val);
    LpResult lp = solve_lp(model, &lo, &hi);
    result.stats.simplex_iterations += lp.iterations;
    ++result.stats.nodes;
    if (lp.status == LpResult::Status::Unbounded)
      throw std::runtime_error("solve_milp: LP relaxation unbounded");
    if (lp.status == LpResult::Status::Optimal) {
      out.bound = lp.objective;
      out.x = std::move(lp.x);
    }
    return lp.status;
  };

  auto gap_of = [&](double bound) {
    if (std::isinf(incumbent_obj))
      return kInf;
    return (incumbent_obj - bound) / std::max(1.0, std::fabs(incumbent_obj));
  };

  auto try_incumbent = [&](const BnbNode &node) -> bool {
    if (most_fractional_binary(model, node.x) >= 0)
      return false;
    if (node.bound < incumbent_obj) {
      incumbent_obj = node.bound;
      incumbent_x = node.x;
      // round binaries exactly
      for (int j = 0; j < nvars; ++j)
        if (model.vars[j].kind == VarKind::Binary)
          incumbent_x[j] = std::round(incumbent_x[j]);
    }
    return true;
  };

  std::priority_queue<BnbNode, std::vector<BnbNode>, NodeOrder> open;

  BnbNode root;
  root.depth = 0;
  root.id = next_id++;
  LpResult::Status st = solve_node({}, root);
  if (st == LpResult::Status::Infeasible) {
    result.status = MilpResult::Status::Infeasible;
    result.best_bound = kInf;
    return result;
  }
  double root_bound = root.bound;

  // initial depth-first dive: fix the most fractional binary to its nearest
  // value until the relaxation is integral or pruned; side branches go to
  // the open list
  {
    BnbNode cur = std::move(root);
    while (!try_incumbent(cur)) {
      if (elapsed() > params.time_limit_s || result.stats.nodes >= params.node_limit) {
        open.push(std::move(cur));
        break;
      }
      int var = most_fractional_binary(model, cur.x);
      int toward = cur.x[var] >= 0.5 ? 1 : 0;
      BnbNode near, far;
      near.depth = far.depth = cur.depth + 1;
      near.fixes = cur.fixes;
      near.fixes.emplace_back(var, toward);
      far.fixes = cur.fixes;
      far.fixes.emplace_back(var, 1 - toward);
      near.id = next_id++;
      far.id = next_id++;
      LpResult::Status st_far = solve_node(far.fixes, far);
      if (st_far == LpResult::Status::Optimal) {
        far.bound = std::max(far.bound, cur.bound);
        if (!try_incumbent(far))
          open.push(std::move(far));
      }
      LpResult::Status st_near = solve_node(near.fixes, near);
      if (st_near != LpResult::Status::Optimal)
        break;
      near.bound = std::max(near.bound, cur.bound);
      cur = std::move(near);
    }
  }

  // best-bound main loop
  bool hit_limit = false;
  double open_bound = root_bound;
  while (!open.empty()) {
    open_bound = open.top().bound;
    if (gap_of(open_bound) <= params.mip_gap)
      break;
    if (elapsed() > params.time_limit_s || result.stats.nodes >= params.node_limit) {
      hit_limit = true;
      break;
    }
    BnbNode node = open.top();
    open.pop();
    if (try_incumbent(node))
      continue;
    int var = most_fractional_binary(model, node.x);
    for (int val = 0; val <= 1; ++val) {
      BnbNode child;
      child.depth = node.depth + 1;
      child.id = next_id++;
      child.fixes = node.fixes;
      child.fixes.emplace_back(var, val);
      LpResult::Status cst = solve_node(child.fixes, child);
      if (cst != LpResult::Status::Optimal)
        continue;
      child.bound = std::max(child.bound, node.bound);
      if (gap_of(child.bound) <= params.mip_gap)
        continue; // cannot improve the incumbent meaningfully
      if (!try_incumbent(child))
        open.push(std::move(child));
    }
  }

  double final_bound = open.empty() ? std::min(incumbent_obj, kInf) : open.top().bound;
  if (open.empty() && std::isinf(incumbent_obj))
    final_bound = kInf; // everything pruned as infeasible

  if (std::isinf(incumbent_obj)) {
    result.status = hit_limit ? MilpResult::Status::TimeLimit
                              : MilpResult::Status::Infeasible;
    result.best_bound = final_bound;
    return result;
  }
  result.objective = incumbent_obj;
  result.x = std::move(incumbent_x);
  result.best_bound = std::min(final_bound, incumbent_obj);
  result.gap = std::max(0.0, gap_of(result.best_bound));
  if (hit_limit && result.gap > params.mip_gap)
    result.status = MilpResult::Status::TimeLimit;
  else if (result.gap <= params.mip_gap)
    result.status = MilpResult::Status::Optimal;
  else
    result.status = MilpResult::Status::Feasible;
  return result;
}

} // namespace stlplan
