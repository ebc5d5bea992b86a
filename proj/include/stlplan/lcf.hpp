#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace stlplan {

enum class VarKind { Continuous, Binary };

struct VarInfo {
  std::string name;
  VarKind kind;
  double lo, hi;
};

/// Declared decision variables. Names follow a fixed scheme so LP exports
/// are reproducible: "t_{i}_{k}", "p_{i}_{k}_{axis}", "aux_{n}", "z_{n}".
class VarTable {
public:
  int add(std::string name, VarKind kind, double lo, double hi);
  int add_continuous(std::string name, double lo, double hi) {
    return add(std::move(name), VarKind::Continuous, lo, hi);
  }
  int add_binary(std::string name) { return add(std::move(name), VarKind::Binary, 0, 1); }
  int add_aux(double lo, double hi) {
    return add_continuous("aux_" + std::to_string(num_aux_++), lo, hi);
  }
  int add_z() { return add_binary("z_" + std::to_string(num_z_++)); }

  std::size_t size() const { return vars_.size(); }
  const VarInfo &operator[](int id) const { return vars_.at(id); }
  void set_bounds(int id, double lo, double hi) {
    vars_.at(id).lo = lo;
    vars_.at(id).hi = hi;
  }
  int find(const std::string &name) const; // -1 if absent
  const std::vector<VarInfo> &all() const { return vars_; }

private:
  std::vector<VarInfo> vars_;
  std::unordered_map<std::string, int> by_name_;
  int num_aux_ = 0;
  int num_z_ = 0;
};

/// Affine expression sum(coeff * var) + constant. Zero coefficients are
/// dropped on normalization so term maps compare structurally.
struct LinearExpr {
  std::map<int, double> terms;
  double constant = 0;

  LinearExpr() = default;
  explicit LinearExpr(double c) : constant(c) {}
  static LinearExpr var(int id, double coeff = 1.0);

  LinearExpr &add(int id, double coeff);
  LinearExpr &add(const LinearExpr &other, double scale = 1.0);

  double eval(const std::vector<double> &assignment) const;
  std::string to_string(const VarTable &vars) const;
};

LinearExpr operator+(LinearExpr a, const LinearExpr &b);
LinearExpr operator-(LinearExpr a, const LinearExpr &b);
LinearExpr operator*(LinearExpr a, double s);

enum class LcfKind : std::uint8_t { False, True, Leaf, And, Or };

struct LcfCounts {
  std::size_t and_nodes = 0;
  std::size_t or_nodes = 0;
  std::size_t leaves = 0;
  std::size_t or_children = 0;
};

/// AND-OR DAG over affine inequalities (each Leaf means "expr >= 0").
/// Nodes are hash-consed: structurally equal builds return the same id, so
/// shared z-subformulas are stored once. Node ids 0 and 1 are False / True.
class LcfArena {
public:
  static constexpr int kFalse = 0;
  static constexpr int kTrue = 1;

  LcfArena();

  int leaf(const LinearExpr &e);
  int and_(std::span<const int> children);
  int or_(std::span<const int> children);
  int and_(std::initializer_list<int> c) { return and_(std::span<const int>(c.begin(), c.size())); }
  int or_(std::initializer_list<int> c) { return or_(std::span<const int>(c.begin(), c.size())); }

  LcfKind kind(int id) const { return nodes_[id].kind; }
  const std::vector<int> &children(int id) const { return nodes_[id].children; }
  const LinearExpr &leaf_expr(int id) const;
  std::size_t num_nodes() const { return nodes_.size(); }

  bool eval(int root, const std::vector<double> &assignment) const;

  /// Counts over distinct reachable nodes (DAG semantics: shared nodes once).
  LcfCounts count_nodes(int root) const;

  /// Indented text dump for golden tests. Shared nodes after the first
  /// occurrence print as "@<id>".
  std::string dump(int root, const VarTable &vars) const;

private:
  struct Node {
    LcfKind kind;
    int leaf_index = -1;          // into leaf_exprs_
    std::vector<int> children;    // And / Or
  };

  int intern(Node n, const std::string &key);
  int nary(LcfKind kind, std::span<const int> children);

  std::vector<Node> nodes_;
  std::vector<LinearExpr> leaf_exprs_;
  std::unordered_map<std::string, int> cons_;
};

} // namespace stlplan
