#include "stlplan/milp.hpp"

#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace stlplan {

double choose_big_m(const LinearExpr &expr, const VarTable &vars) {
  double lo = expr.constant;
  for (auto [id, c] : expr.terms) {
    const VarInfo &v = vars[id];
    double bound = c > 0 ? v.lo : v.hi;
    if (std::isinf(bound))
      throw std::runtime_error("choose_big_m: variable '" + v.name +
                               "' is unbounded; big-M underivable");
    lo += c * bound;
  }
  return std::max(0.0, -lo) + 1.0;
}

namespace {

class Eliminator {
public:
  Eliminator(const LcfArena &arena, MilpModel &model) : arena_(arena), model_(model) {}

  void run(int root) {
    if (root == LcfArena::kTrue)
      return;
    if (root == LcfArena::kFalse) {
      model_.constraints.push_back(LinearExpr(-1.0)); // -1 >= 0: infeasible
      return;
    }
    count_refs(root);
    emit(root, {});
    while (!pending_.empty()) {
      auto [node, indicator] = pending_.front();
      pending_.pop_front();
      emit(node, {indicator});
    }
  }

private:
  void count_refs(int root) {
    refs_.assign(arena_.num_nodes(), 0);
    std::vector<char> seen(arena_.num_nodes(), 0);
    std::vector<int> stack{root};
    refs_[root] = 1;
    while (!stack.empty()) {
      int id = stack.back();
      stack.pop_back();
      if (seen[id])
        continue;
      seen[id] = 1;
      for (int c : arena_.children(id)) {
        ++refs_[c];
        if (!seen[c])
          stack.push_back(c);
      }
    }
  }

  bool reified(int id) const {
    LcfKind k = arena_.kind(id);
    return (k == LcfKind::And || k == LcfKind::Or) && refs_[id] > 1;
  }

  int indicator_for(int id) {
    auto it = indicators_.find(id);
    if (it != indicators_.end())
      return it->second;
    int z = new_binary();
    indicators_.emplace(id, z);
    pending_.emplace_back(id, z);
    return z;
  }

  int new_binary() {
    ++model_.binaries_added;
    return model_.vars.add_z();
  }

  // Leaf enforced only when all gate binaries are 1: expr + M*sum(1-g) >= 0.
  void emit_gated_leaf(const LinearExpr &expr, const std::vector<int> &gates) {
    LinearExpr c = expr;
    if (!gates.empty()) {
      double m = choose_big_m(expr, model_.vars);
      model_.max_big_m = std::max(model_.max_big_m, m);
      for (int g : gates) {
        c.constant += m;
        c.add(g, -m);
      }
    }
    model_.constraints.push_back(std::move(c));
  }

  // target >= 1 when all gates are 1: target - 1 + sum(1-g) >= 0.
  void emit_implication(int target_binary, const std::vector<int> &gates) {
    LinearExpr c = LinearExpr::var(target_binary);
    c.constant -= 1;
    for (int g : gates) {
      c.constant += 1;
      c.add(g, -1);
    }
    model_.constraints.push_back(std::move(c));
  }

  void emit(int id, std::vector<int> gates) {
    switch (arena_.kind(id)) {
    case LcfKind::True:
      return;
    case LcfKind::False:
      // unsatisfiable under active gates
      emit_gated_leaf(LinearExpr(-1.0), gates);
      return;
    case LcfKind::Leaf:
      emit_gated_leaf(arena_.leaf_expr(id), gates);
      return;
    case LcfKind::And:
      for (int c : arena_.children(id)) {
        if (arena_.kind(c) == LcfKind::Leaf) {
          emit_gated_leaf(arena_.leaf_expr(c), gates);
        } else if (reified(c)) {
          emit_implication(indicator_for(c), gates);
        } else {
          emit(c, gates);
        }
      }
      return;
    case LcfKind::Or: {
      LinearExpr sum;
      sum.constant = -1; // sum z_i >= 1
      for (int c : arena_.children(id)) {
        int z = new_binary();
        sum.add(z, 1);
        std::vector<int> child_gates = gates;
        child_gates.push_back(z);
        if (arena_.kind(c) == LcfKind::Leaf) {
          emit_gated_leaf(arena_.leaf_expr(c), child_gates);
        } else if (reified(c)) {
          emit_implication(indicator_for(c), child_gates);
        } else {
          emit(c, child_gates);
        }
      }
      // relaxed when any outer gate is 0
      for (int g : gates) {
        sum.constant += 1;
        sum.add(g, -1);
      }
      model_.constraints.push_back(std::move(sum));
      return;
    }
    }
  }

  const LcfArena &arena_;
  MilpModel &model_;
  std::vector<int> refs_;
  std::unordered_map<int, int> indicators_;
  std::deque<std::pair<int, int>> pending_;
};

} // namespace

void eliminate_disjunctions(const LcfArena &arena, int root, MilpModel &model) {
  Eliminator(arena, model).run(root);
}

Feasibility check_feasible(const MilpModel &model, const std::vector<double> &x,
                           double tol) {
  Feasibility result{true, 0.0, ""};
  auto report = [&](double violation, const std::string &what) {
    if (violation > result.worst_violation) {
      result.worst_violation = violation;
      result.worst_constraint = what;
    }
    if (violation > tol)
      result.feasible = false;
  };
  for (std::size_t i = 0; i < model.vars.size(); ++i) {
    const VarInfo &v = model.vars[static_cast<int>(i)];
    double val = x[i];
    report(v.lo - val, "lower bound of " + v.name);
    report(val - v.hi, "upper bound of " + v.name);
    if (v.kind == VarKind::Binary)
      report(std::fabs(val - std::round(val)), "integrality of " + v.name);
  }
  for (std::size_t i = 0; i < model.constraints.size(); ++i) {
    double lhs = model.constraints[i].eval(x);
    report(-lhs, "constraint c" + std::to_string(i + 1));
  }
  return result;
}

namespace {

std::string coeff_str(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

} // namespace

std::string export_lp(const MilpModel &model) {
  // Variable tokens in the file are the deterministic names from VarTable.
  std::ostringstream os;
  os << "Minimize\n obj: ";
  if (model.objective.terms.empty()) {
    os << "0 " << (model.vars.size() ? model.vars[0].name : "x0");
  } else {
    bool first = true;
    for (auto [id, c] : model.objective.terms) {
      if (first) {
        if (c < 0)
          os << "- ";
        first = false;
      } else {
        os << (c < 0 ? " - " : " + ");
      }
      os << coeff_str(std::fabs(c)) << " " << model.vars[id].name;
    }
  }
  os << "\nSubject To\n";
  for (std::size_t i = 0; i < model.constraints.size(); ++i) {
    const LinearExpr &e = model.constraints[i];
    os << " c" << (i + 1) << ": ";
    if (e.terms.empty()) {
      os << "0 " << (model.vars.size() ? model.vars[0].name : "x0");
    } else {
      bool first = true;
      for (auto [id, c] : e.terms) {
        if (first) {
          if (c < 0)
            os << "- ";
          first = false;
        } else {
          os << (c < 0 ? " - " : " + ");
        }
        os << coeff_str(std::fabs(c)) << " " << model.vars[id].name;
      }
    }
    os << " >= " << coeff_str(-e.constant) << "\n";
  }
  os << "Bounds\n";
  for (std::size_t i = 0; i < model.vars.size(); ++i) {
    const VarInfo &v = model.vars[static_cast<int>(i)];
    if (v.kind == VarKind::Binary)
      continue; // implied by Binaries section
    if (std::isinf(v.lo) && std::isinf(v.hi))
      os << " " << v.name << " free\n";
    else if (std::isinf(v.hi))
      os << " " << v.name << " >= " << coeff_str(v.lo) << "\n";
    else if (std::isinf(v.lo))
      os << " " << v.name << " <= " << coeff_str(v.hi) << "\n";
    else
      os << " " << coeff_str(v.lo) << " <= " << v.name << " <= " << coeff_str(v.hi)
         << "\n";
  }
  bool any_binary = false;
  for (const VarInfo &v : model.vars.all())
    if (v.kind == VarKind::Binary) {
      any_binary = true;
      break;
    }
  if (any_binary) {
    os << "Binaries\n";
    for (const VarInfo &v : model.vars.all())
      if (v.kind == VarKind::Binary)
        os << " " << v.name << "\n";
  }
  os << "End\n";
  return os.str();
}

std::vector<double> import_solution(const std::string &text, const MilpModel &model,
                                    double tol) {
  std::vector<double> x(model.vars.size(),
                        std::numeric_limits<double>::quiet_NaN());
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos)
      line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string name;
    if (!(ls >> name))
      continue; // blank
    double value;
    if (!(ls >> value))
      throw std::runtime_error("solution parse error at line " +
                               std::to_string(lineno) + ": missing value for '" +
                               name + "'");
    std::string extra;
    if (ls >> extra)
      throw std::runtime_error("solution parse error at line " +
                               std::to_string(lineno) + ": trailing token '" +
                               extra + "'");
    int id = model.vars.find(name);
    if (id < 0)
      throw std::runtime_error("solution parse error at line " +
                               std::to_string(lineno) + ": unknown variable '" +
                               name + "'");
    x[id] = value;
  }
  for (std::size_t i = 0; i < x.size(); ++i)
    if (std::isnan(x[i]))
      throw std::runtime_error("solution is missing variable '" +
                               model.vars[static_cast<int>(i)].name + "'");
  Feasibility f = check_feasible(model, x, tol);
  if (!f.feasible)
    throw std::runtime_error("imported solution infeasible: " + f.worst_constraint +
                             " violated by " + std::to_string(f.worst_violation));
  return x;
}

} // namespace stlplan
