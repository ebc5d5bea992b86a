#include "stlplan/lcf.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace stlplan {

int VarTable::add(std::string name, VarKind kind, double lo, double hi) {
  if (by_name_.count(name))
    throw std::invalid_argument("duplicate variable name '" + name + "'");
  if (kind == VarKind::Binary && (lo != 0 || hi != 1))
    throw std::invalid_argument("binary variable must have bounds {0,1}");
  int id = static_cast<int>(vars_.size());
  by_name_.emplace(name, id);
  vars_.push_back(VarInfo{std::move(name), kind, lo, hi});
  return id;
}

int VarTable::find(const std::string &name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? -1 : it->second;
}

LinearExpr LinearExpr::var(int id, double coeff) {
  LinearExpr e;
  e.add(id, coeff);
  return e;
}

LinearExpr &LinearExpr::add(int id, double coeff) {
  if (coeff == 0)
    return *this;
  double &slot = terms[id];
  slot += coeff;
  if (slot == 0)
    terms.erase(id);
  return *this;
}

LinearExpr &LinearExpr::add(const LinearExpr &other, double scale) {
  for (auto [id, c] : other.terms)
    add(id, c * scale);
  constant += other.constant * scale;
  return *this;
}

double LinearExpr::eval(const std::vector<double> &assignment) const {
  double s = constant;
  for (auto [id, c] : terms) {
    if (id < 0 || static_cast<std::size_t>(id) >= assignment.size() ||
        std::isnan(assignment[id]))
      throw std::out_of_range("LinearExpr::eval: variable " + std::to_string(id) +
                              " missing from assignment");
    s += c * assignment[id];
  }
  return s;
}

std::string LinearExpr::to_string(const VarTable &vars) const {
  std::ostringstream os;
  bool first = true;
  for (auto [id, c] : terms) {
    if (!first)
      os << " + ";
    first = false;
    if (c != 1)
      os << c << "*";
    os << vars[id].name;
  }
  if (first || constant != 0) {
    if (!first)
      os << " + ";
    os << constant;
  }
  return os.str();
}

LinearExpr operator+(LinearExpr a, const LinearExpr &b) { return a.add(b), a; }
LinearExpr operator-(LinearExpr a, const LinearExpr &b) { return a.add(b, -1.0), a; }
LinearExpr operator*(LinearExpr a, double s) {
  if (s == 0)
    return LinearExpr();
  for (auto &[id, c] : a.terms)
    c *= s;
  a.constant *= s;
  return a;
}

LcfArena::LcfArena() {
  nodes_.push_back(Node{LcfKind::False, -1, {}});
  nodes_.push_back(Node{LcfKind::True, -1, {}});
}

const LinearExpr &LcfArena::leaf_expr(int id) const {
  const Node &n = nodes_.at(id);
  if (n.kind != LcfKind::Leaf)
    throw std::invalid_argument("leaf_expr: node is not a leaf");
  return leaf_exprs_[n.leaf_index];
}

int LcfArena::intern(Node n, const std::string &key) {
  auto it = cons_.find(key);
  if (it != cons_.end())
    return it->second;
  int id = static_cast<int>(nodes_.size());
  nodes_.push_back(std::move(n));
  cons_.emplace(key, id);
  return id;
}

int LcfArena::leaf(const LinearExpr &e) {
  if (e.terms.empty()) // constant predicate decides itself
    return e.constant >= 0 ? kTrue : kFalse;
  std::string key = "L";
  char buf[48];
  for (auto [id, c] : e.terms) {
    std::snprintf(buf, sizeof buf, ":%d*%.17g", id, c);
    key += buf;
  }
  std::snprintf(buf, sizeof buf, ":+%.17g", e.constant);
  key += buf;
  auto it = cons_.find(key);
  if (it != cons_.end())
    return it->second;
  leaf_exprs_.push_back(e);
  Node n{LcfKind::Leaf, static_cast<int>(leaf_exprs_.size()) - 1, {}};
  return intern(std::move(n), key);
}

int LcfArena::nary(LcfKind kind, std::span<const int> children) {
  if (children.empty())
    throw std::invalid_argument("And/Or: empty child list");
  const int identity = (kind == LcfKind::And) ? kTrue : kFalse;
  const int absorbing = (kind == LcfKind::And) ? kFalse : kTrue;
  std::vector<int> kids;
  kids.reserve(children.size());
  for (int c : children) {
    if (c < 0 || static_cast<std::size_t>(c) >= nodes_.size())
      throw std::out_of_range("And/Or: bad child id");
    if (c == absorbing)
      return absorbing;
    if (c == identity)
      continue;
    if (nodes_[c].kind == kind) {
      // same-kind children flatten into an n-ary node
      for (int g : nodes_[c].children)
        kids.push_back(g);
    } else {
      kids.push_back(c);
    }
  }
  // drop duplicate children, preserving first-occurrence order
  std::vector<int> uniq;
  for (int c : kids) {
    bool seen = false;
    for (int u : uniq)
      if (u == c) {
        seen = true;
        break;
      }
    if (!seen)
      uniq.push_back(c);
  }
  if (uniq.empty())
    return identity;
  if (uniq.size() == 1)
    return uniq[0];
  std::string key = (kind == LcfKind::And) ? "A" : "O";
  for (int c : uniq)
    key += ":" + std::to_string(c);
  return intern(Node{kind, -1, std::move(uniq)}, key);
}

int LcfArena::and_(std::span<const int> children) { return nary(LcfKind::And, children); }
int LcfArena::or_(std::span<const int> children) { return nary(LcfKind::Or, children); }

bool LcfArena::eval(int root, const std::vector<double> &assignment) const {
  std::vector<signed char> memo(nodes_.size(), -1);
  // iterative DFS; encodings can be deep
  struct Frame {
    int id;
    std::size_t next_child;
  };
  std::vector<Frame> stack{{root, 0}};
  while (!stack.empty()) {
    Frame &f = stack.back();
    const Node &n = nodes_[f.id];
    if (memo[f.id] >= 0) {
      stack.pop_back();
      continue;
    }
    switch (n.kind) {
    case LcfKind::False:
      memo[f.id] = 0;
      stack.pop_back();
      break;
    case LcfKind::True:
      memo[f.id] = 1;
      stack.pop_back();
      break;
    case LcfKind::Leaf:
      memo[f.id] = leaf_exprs_[n.leaf_index].eval(assignment) >= 0 ? 1 : 0;
      stack.pop_back();
      break;
    case LcfKind::And:
    case LcfKind::Or: {
      const bool is_and = n.kind == LcfKind::And;
      bool decided = false;
      while (f.next_child < n.children.size()) {
        int c = n.children[f.next_child];
        if (memo[c] < 0) {
          stack.push_back({c, 0});
          decided = true; // revisit after the child resolves
          break;
        }
        if (memo[c] == (is_and ? 0 : 1)) {
          memo[f.id] = is_and ? 0 : 1; // short-circuit
          stack.pop_back();
          decided = true;
          break;
        }
        ++f.next_child;
      }
      if (!decided) {
        memo[f.id] = is_and ? 1 : 0;
        stack.pop_back();
      }
      break;
    }
    }
  }
  return memo[root] == 1;
}

LcfCounts LcfArena::count_nodes(int root) const {
  LcfCounts counts;
  std::vector<char> seen(nodes_.size(), 0);
  std::vector<int> stack{root};
  while (!stack.empty()) {
    int id = stack.back();
    stack.pop_back();
    if (seen[id])
      continue;
    seen[id] = 1;
    const Node &n = nodes_[id];
    switch (n.kind) {
    case LcfKind::Leaf:
      ++counts.leaves;
      break;
    case LcfKind::And:
      ++counts.and_nodes;
      break;
    case LcfKind::Or:
      ++counts.or_nodes;
      counts.or_children += n.children.size();
      break;
    default:
      break;
    }
    for (int c : n.children)
      stack.push_back(c);
  }
  return counts;
}

std::string LcfArena::dump(int root, const VarTable &vars) const {
  std::ostringstream os;
  std::vector<char> seen(nodes_.size(), 0);
  struct Frame {
    int id;
    int depth;
  };
  std::vector<Frame> stack{{root, 0}};
  while (!stack.empty()) {
    auto [id, depth] = stack.back();
    stack.pop_back();
    for (int i = 0; i < depth; ++i)
      os << "  ";
    const Node &n = nodes_[id];
    if (seen[id] && (n.kind == LcfKind::And || n.kind == LcfKind::Or)) {
      os << "@" << id << "\n";
      continue;
    }
    seen[id] = 1;
    switch (n.kind) {
    case LcfKind::False:
      os << "false\n";
      break;
    case LcfKind::True:
      os << "true\n";
      break;
    case LcfKind::Leaf:
      os << "leaf#" << id << " " << leaf_exprs_[n.leaf_index].to_string(vars)
         << " >= 0\n";
      break;
    case LcfKind::And:
    case LcfKind::Or:
      os << (n.kind == LcfKind::And ? "and#" : "or#") << id << "\n";
      for (auto it = n.children.rbegin(); it != n.children.rend(); ++it)
        stack.push_back({*it, depth + 1});
      break;
    }
  }
  return os.str();
}

} // namespace stlplan
