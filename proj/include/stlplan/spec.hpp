#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "stlplan/geometry.hpp"

namespace stlplan {

// ---------------------------------------------------------------------------
// Single-agent STL abstract syntax.
//
// Formulas produced by the parser and by to_nnf() are in Negation Normal
// Form: Not only wraps atoms, represented directly as NegAtom. The Not kind
// exists so that formulas with general negation can be built and then
// normalized.
// ---------------------------------------------------------------------------

enum class StlKind {
  Atom,       // region membership
  NegAtom,    // region exclusion
  Not,        // pre-NNF only
  And,
  Or,
  Always,     // G[a,b]
  Eventually, // F[a,b]
  Until,      // U[a,b], binary
  Release,    // R[a,b], binary
};

struct StlNode;
using StlPtr = std::shared_ptr<const StlNode>;

struct StlNode {
  StlKind kind;
  std::string region;          // Atom / NegAtom
  double a = 0.0, b = 0.0;     // temporal window, seconds
  std::vector<StlPtr> children;
};

StlPtr stl_atom(std::string region);
StlPtr stl_neg_atom(std::string region);
StlPtr stl_not(StlPtr f);
StlPtr stl_and(std::vector<StlPtr> children);
StlPtr stl_or(std::vector<StlPtr> children);
StlPtr stl_always(double a, double b, StlPtr f);
StlPtr stl_eventually(double a, double b, StlPtr f);
StlPtr stl_until(double a, double b, StlPtr lhs, StlPtr rhs);
StlPtr stl_release(double a, double b, StlPtr lhs, StlPtr rhs);

/// Push negations down to the atoms by duality; double negations cancel.
/// Idempotent, semantics-preserving.
StlPtr to_nnf(const StlPtr &f);

/// Number of operator nodes; atoms and negated atoms count as 0.
std::size_t formula_size(const StlPtr &f);

bool is_nnf(const StlPtr &f);

std::string to_string(const StlPtr &f);

// ---------------------------------------------------------------------------
// Multi-agent level: an AND-OR tree over agent-bound STL formulas.
// ---------------------------------------------------------------------------

enum class MaKind { AgentAtom, And, Or };

struct MaNode;
using MaPtr = std::shared_ptr<const MaNode>;

struct MaNode {
  MaKind kind;
  int agent = 0; // 1-based, AgentAtom only
  StlPtr phi;
  std::vector<MaPtr> children;
};

MaPtr ma_agent(int agent, StlPtr phi);
MaPtr ma_and(std::vector<MaPtr> children);
MaPtr ma_or(std::vector<MaPtr> children);

std::size_t ma_size(const MaPtr &f);
std::string to_string(const MaPtr &f);

/// Region name -> polytope.
using RegionTable = std::map<std::string, Polytope>;

struct ParseError : std::runtime_error {
  int line, column;
  ParseError(const std::string &msg, int line_, int col_)
      : std::runtime_error(msg + " at line " + std::to_string(line_) +
                           ", column " + std::to_string(col_)),
        line(line_), column(col_) {}
};

/// Parse a multi-agent specification. Grammar:
///   ma  ::= ma '&' ma | ma '|' ma | '(' ma ')' | 'A' INT '(' stl ')'
///   stl ::= stl '&' stl | stl '|' stl | '!' stl | '(' stl ')'
///         | ('F'|'G') '[' NUM ',' NUM ']' stl
///         | stl ('U'|'R') '[' NUM ',' NUM ']' stl | IDENT
/// Precedence: ! > U,R > & > |; U/R left-associative. The letters F, G, U,
/// R act as operators only when immediately followed by '['; otherwise they
/// are region names. All region names must resolve and agent indices must
/// lie in [1, num_agents]. The result is in NNF.
MaPtr parse_spec(const std::string &text, const RegionTable &regions,
                 int num_agents);

/// Parse a bare single-agent STL formula (same grammar, stl entry point).
StlPtr parse_stl(const std::string &text, const RegionTable &regions);

} // namespace stlplan
