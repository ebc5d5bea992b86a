#include "stlplan/spec.hpp"

#include <cctype>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace stlplan {

namespace {

StlPtr make(StlNode n) { return std::make_shared<const StlNode>(std::move(n)); }

void check_interval(double a, double b) {
  if (!(0 <= a && a <= b))
    throw std::invalid_argument("temporal interval must satisfy 0 <= a <= b, got [" +
                                std::to_string(a) + ", " + std::to_string(b) + "]");
}

std::vector<StlPtr> flatten(StlKind kind, std::vector<StlPtr> children) {
  std::vector<StlPtr> out;
  for (auto &c : children) {
    if (c->kind == kind)
      out.insert(out.end(), c->children.begin(), c->children.end());
    else
      out.push_back(std::move(c));
  }
  return out;
}

} // namespace

StlPtr stl_atom(std::string region) {
  return make({StlKind::Atom, std::move(region), 0, 0, {}});
}

StlPtr stl_neg_atom(std::string region) {
  return make({StlKind::NegAtom, std::move(region), 0, 0, {}});
}

StlPtr stl_not(StlPtr f) { return make({StlKind::Not, "", 0, 0, {std::move(f)}}); }

StlPtr stl_and(std::vector<StlPtr> children) {
  if (children.empty())
    throw std::invalid_argument("stl_and: empty child list");
  if (children.size() == 1)
    return children[0];
  return make({StlKind::And, "", 0, 0, flatten(StlKind::And, std::move(children))});
}

StlPtr stl_or(std::vector<StlPtr> children) {
  if (children.empty())
    throw std::invalid_argument("stl_or: empty child list");
  if (children.size() == 1)
    return children[0];
  return make({StlKind::Or, "", 0, 0, flatten(StlKind::Or, std::move(children))});
}

StlPtr stl_always(double a, double b, StlPtr f) {
  check_interval(a, b);
  return make({StlKind::Always, "", a, b, {std::move(f)}});
}

StlPtr stl_eventually(double a, double b, StlPtr f) {
  check_interval(a, b);
  return make({StlKind::Eventually, "", a, b, {std::move(f)}});
}

StlPtr stl_until(double a, double b, StlPtr lhs, StlPtr rhs) {
  check_interval(a, b);
  return make({StlKind::Until, "", a, b, {std::move(lhs), std::move(rhs)}});
}

StlPtr stl_release(double a, double b, StlPtr lhs, StlPtr rhs) {
  check_interval(a, b);
  return make({StlKind::Release, "", a, b, {std::move(lhs), std::move(rhs)}});
}

namespace {

StlPtr nnf(const StlPtr &f, bool negated) {
  switch (f->kind) {
  case StlKind::Atom:
    return negated ? stl_neg_atom(f->region) : f;
  case StlKind::NegAtom:
    return negated ? stl_atom(f->region) : f;
  case StlKind::Not:
    return nnf(f->children[0], !negated);
  case StlKind::And:
  case StlKind::Or: {
    std::vector<StlPtr> kids;
    kids.reserve(f->children.size());
    for (const auto &c : f->children)
      kids.push_back(nnf(c, negated));
    const bool conj = (f->kind == StlKind::And) != negated;
    return conj ? stl_and(std::move(kids)) : stl_or(std::move(kids));
  }
  case StlKind::Always: {
    StlPtr c = nnf(f->children[0], negated);
    return negated ? stl_eventually(f->a, f->b, c) : stl_always(f->a, f->b, c);
  }
  case StlKind::Eventually: {
    StlPtr c = nnf(f->children[0], negated);
    return negated ? stl_always(f->a, f->b, c) : stl_eventually(f->a, f->b, c);
  }
  case StlKind::Until: {
    StlPtr l = nnf(f->children[0], negated), r = nnf(f->children[1], negated);
    return negated ? stl_release(f->a, f->b, l, r) : stl_until(f->a, f->b, l, r);
  }
  case StlKind::Release: {
    StlPtr l = nnf(f->children[0], negated), r = nnf(f->children[1], negated);
    return negated ? stl_until(f->a, f->b, l, r) : stl_release(f->a, f->b, l, r);
  }
  }
  throw std::logic_error("nnf: unknown node kind");
}

} // namespace

StlPtr to_nnf(const StlPtr &f) { return nnf(f, false); }

std::size_t formula_size(const StlPtr &f) {
  if (f->kind == StlKind::Atom || f->kind == StlKind::NegAtom)
    return 0;
  std::size_t n = 1;
  for (const auto &c : f->children)
    n += formula_size(c);
  return n;
}

bool is_nnf(const StlPtr &f) {
  if (f->kind == StlKind::Not)
    return false;
  for (const auto &c : f->children)
    if (!is_nnf(c))
      return false;
  return true;
}

namespace {

std::string num_str(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

void print_stl(const StlPtr &f, std::ostream &os) {
  switch (f->kind) {
  case StlKind::Atom:
    os << f->region;
    break;
  case StlKind::NegAtom:
    os << "!" << f->region;
    break;
  case StlKind::Not:
    os << "!(";
    print_stl(f->children[0], os);
    os << ")";
    break;
  case StlKind::And:
  case StlKind::Or: {
    const char *sep = f->kind == StlKind::And ? " & " : " | ";
    os << "(";
    for (std::size_t i = 0; i < f->children.size(); ++i) {
      if (i)
        os << sep;
      print_stl(f->children[i], os);
    }
    os << ")";
    break;
  }
  case StlKind::Always:
  case StlKind::Eventually:
    os << (f->kind == StlKind::Always ? "G[" : "F[") << num_str(f->a) << ","
       << num_str(f->b) << "] (";
    print_stl(f->children[0], os);
    os << ")";
    break;
  case StlKind::Until:
  case StlKind::Release:
    os << "((";
    print_stl(f->children[0], os);
    os << ") " << (f->kind == StlKind::Until ? "U[" : "R[") << num_str(f->a)
       << "," << num_str(f->b) << "] (";
    print_stl(f->children[1], os);
    os << "))";
    break;
  }
}

} // namespace

std::string to_string(const StlPtr &f) {
  std::ostringstream os;
  print_stl(f, os);
  return os.str();
}

MaPtr ma_agent(int agent, StlPtr phi) {
  if (agent < 1)
    throw std::invalid_argument("ma_agent: agent index must be >= 1");
  return std::make_shared<const MaNode>(
      MaNode{MaKind::AgentAtom, agent, std::move(phi), {}});
}

namespace {

MaPtr ma_nary(MaKind kind, std::vector<MaPtr> children) {
  if (children.empty())
    throw std::invalid_argument("ma connective: empty child list");
  if (children.size() == 1)
    return children[0];
  std::vector<MaPtr> out;
  for (auto &c : children) {
    if (c->kind == kind)
      out.insert(out.end(), c->children.begin(), c->children.end());
    else
      out.push_back(std::move(c));
  }
  return std::make_shared<const MaNode>(MaNode{kind, 0, nullptr, std::move(out)});
}

} // namespace

MaPtr ma_and(std::vector<MaPtr> children) { return ma_nary(MaKind::And, std::move(children)); }
MaPtr ma_or(std::vector<MaPtr> children) { return ma_nary(MaKind::Or, std::move(children)); }

std::size_t ma_size(const MaPtr &f) {
  if (f->kind == MaKind::AgentAtom)
    return formula_size(f->phi);
  std::size_t n = 1;
  for (const auto &c : f->children)
    n += ma_size(c);
  return n;
}

std::string to_string(const MaPtr &f) {
  if (f->kind == MaKind::AgentAtom)
    return "A" + std::to_string(f->agent) + "(" + to_string(f->phi) + ")";
  std::string sep = f->kind == MaKind::And ? " & " : " | ";
  std::string out = "(";
  for (std::size_t i = 0; i < f->children.size(); ++i) {
    if (i)
      out += sep;
    out += to_string(f->children[i]);
  }
  return out + ")";
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

enum class Tok { LParen, RParen, LBrack, RBrack, Comma, Amp, Pipe, Bang, Ident, Number, End };

struct Token {
  Tok kind;
  std::string text;
  double value = 0;
  int line, col;
};

class Lexer {
public:
  explicit Lexer(const std::string &text) : s_(text) { advance(); }

  const Token &peek() const { return tok_; }

  Token next() {
    Token t = tok_;
    advance();
    return t;
  }

private:
  void advance() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) {
      if (s_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= s_.size()) {
      tok_.kind = Tok::End;
      tok_.text.clear();
      return;
    }
    char c = s_[pos_];
    auto single = [&](Tok k) {
      tok_.kind = k;
      tok_.text = std::string(1, c);
      ++pos_;
      ++col_;
    };
    switch (c) {
    case '(': return single(Tok::LParen);
    case ')': return single(Tok::RParen);
    case '[': return single(Tok::LBrack);
    case ']': return single(Tok::RBrack);
    case ',': return single(Tok::Comma);
    case '&': return single(Tok::Amp);
    case '|': return single(Tok::Pipe);
    case '!': return single(Tok::Bang);
    default: break;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
        ++pos_;
        ++col_;
      }
      tok_.kind = Tok::Ident;
      tok_.text = s_.substr(start, pos_ - start);
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '+') {
      std::size_t start = pos_;
      const char *begin = s_.c_str() + start;
      char *end = nullptr;
      double v = std::strtod(begin, &end);
      if (end == begin)
        throw ParseError("malformed number", line_, col_);
      std::size_t len = static_cast<std::size_t>(end - begin);
      pos_ += len;
      col_ += static_cast<int>(len);
      tok_.kind = Tok::Number;
      tok_.text = s_.substr(start, len);
      tok_.value = v;
      return;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line_, col_);
  }

  const std::string &s_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token tok_;
};

class Parser {
public:
  Parser(const std::string &text, const RegionTable &regions, int num_agents)
      : lex_(text), regions_(regions), num_agents_(num_agents) {}

  MaPtr parse_ma_top() {
    MaPtr f = parse_ma_or();
    expect_end();
    return f;
  }

  StlPtr parse_stl_top() {
    StlPtr f = parse_stl_or();
    expect_end();
    return f;
  }

private:
  void expect_end() {
    if (lex_.peek().kind != Tok::End)
      throw ParseError("trailing input '" + lex_.peek().text + "'",
                       lex_.peek().line, lex_.peek().col);
  }

  Token expect(Tok k, const char *what) {
    if (lex_.peek().kind != k)
      throw ParseError(std::string("expected ") + what + ", got '" +
                           lex_.peek().text + "'",
                       lex_.peek().line, lex_.peek().col);
    return lex_.next();
  }

  std::pair<double, double> parse_interval() {
    Token open = expect(Tok::LBrack, "'['");
    double a = expect(Tok::Number, "number").value;
    expect(Tok::Comma, "','");
    double b = expect(Tok::Number, "number").value;
    expect(Tok::RBrack, "']'");
    if (!(0 <= a && a <= b))
      throw ParseError("interval must satisfy 0 <= a <= b", open.line, open.col);
    return {a, b};
  }

  // ma ::= or-list of and-lists of (parenthesized ma | agent atom)
  MaPtr parse_ma_or() {
    std::vector<MaPtr> parts{parse_ma_and()};
    while (lex_.peek().kind == Tok::Pipe) {
      lex_.next();
      parts.push_back(parse_ma_and());
    }
    return ma_or(std::move(parts));
  }

  MaPtr parse_ma_and() {
    std::vector<MaPtr> parts{parse_ma_primary()};
    while (lex_.peek().kind == Tok::Amp) {
      lex_.next();
      parts.push_back(parse_ma_primary());
    }
    return ma_and(std::move(parts));
  }

  static bool is_agent_ref(const std::string &s) {
    if (s.size() < 2 || s[0] != 'A')
      return false;
    for (std::size_t i = 1; i < s.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(s[i])))
        return false;
    return true;
  }

  MaPtr parse_ma_primary() {
    const Token &t = lex_.peek();
    if (t.kind == Tok::LParen) {
      lex_.next();
      MaPtr f = parse_ma_or();
      expect(Tok::RParen, "')'");
      return f;
    }
    if (t.kind == Tok::Ident && is_agent_ref(t.text)) {
      Token agent_tok = lex_.next();
      int idx = std::atoi(agent_tok.text.c_str() + 1);
      if (idx < 1 || idx > num_agents_)
        throw ParseError("agent index " + std::to_string(idx) +
                             " out of range [1, " + std::to_string(num_agents_) + "]",
                         agent_tok.line, agent_tok.col);
      expect(Tok::LParen, "'(' after agent reference");
      StlPtr phi = parse_stl_or();
      expect(Tok::RParen, "')'");
      return ma_agent(idx, to_nnf(phi));
    }
    throw ParseError("expected agent atom 'A<i>(...)' or '('", t.line, t.col);
  }

  // stl, precedence: ! > U,R > & > |
  StlPtr parse_stl_or() {
    std::vector<StlPtr> parts{parse_stl_and()};
    while (lex_.peek().kind == Tok::Pipe) {
      lex_.next();
      parts.push_back(parse_stl_and());
    }
    return stl_or(std::move(parts));
  }

  StlPtr parse_stl_and() {
    std::vector<StlPtr> parts{parse_stl_ur()};
    while (lex_.peek().kind == Tok::Amp) {
      lex_.next();
      parts.push_back(parse_stl_ur());
    }
    return stl_and(std::move(parts));
  }

  StlPtr parse_stl_ur() {
    StlPtr lhs = parse_stl_unary();
    for (;;) {
      const Token &t = lex_.peek();
      if (t.kind != Tok::Ident || (t.text != "U" && t.text != "R"))
        break;
      // 'U'/'R' is only an operator when followed by '['; a bare trailing
      // ident here would be a syntax error either way (two adjacent idents).
      Token op = lex_.next();
      auto [a, b] = parse_interval();
      StlPtr rhs = parse_stl_unary();
      lhs = op.text == "U" ? stl_until(a, b, lhs, rhs) : stl_release(a, b, lhs, rhs);
    }
    return lhs;
  }

  StlPtr parse_stl_unary() {
    const Token &t = lex_.peek();
    if (t.kind == Tok::Bang) {
      lex_.next();
      return stl_not(parse_stl_unary());
    }
    if (t.kind == Tok::Ident && (t.text == "F" || t.text == "G")) {
      // Temporal only when followed by '['; otherwise a region name.
      Token op = lex_.next();
      if (lex_.peek().kind == Tok::LBrack) {
        auto [a, b] = parse_interval();
        StlPtr c = parse_stl_unary();
        return op.text == "F" ? stl_eventually(a, b, c) : stl_always(a, b, c);
      }
      return make_region_atom(op);
    }
    return parse_stl_primary();
  }

  StlPtr parse_stl_primary() {
    const Token &t = lex_.peek();
    if (t.kind == Tok::LParen) {
      lex_.next();
      StlPtr f = parse_stl_or();
      expect(Tok::RParen, "')'");
      return f;
    }
    if (t.kind == Tok::Ident)
      return make_region_atom(lex_.next());
    throw ParseError("expected region name, '!', temporal operator, or '('",
                     t.line, t.col);
  }

  StlPtr make_region_atom(const Token &t) {
    if (regions_.find(t.text) == regions_.end())
      throw ParseError("unknown region '" + t.text + "'", t.line, t.col);
    return stl_atom(t.text);
  }

  Lexer lex_;
  const RegionTable &regions_;
  int num_agents_;
};

} // namespace

MaPtr parse_spec(const std::string &text, const RegionTable &regions, int num_agents) {
  return Parser(text, regions, num_agents).parse_ma_top();
}

StlPtr parse_stl(const std::string &text, const RegionTable &regions) {
  return to_nnf(Parser(text, regions, 0).parse_stl_top());
}

} // namespace stlplan
