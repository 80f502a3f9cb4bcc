#pragma once
// Smooth scalar expressions over named variables: a small AST with a
// recursive descent parser and printer. This is the finite stand-in for
// smooth functions that the evaluation engine lifts through an algebra.
//
// Grammar:
//   expr   := term (("+"|"-") term)*
//   term   := factor (("*"|"/") factor)*
//   factor := atom ("^" integer)? | "-" factor
//   atom   := number | ident | ident "(" expr ")" | "(" expr ")"
//   number := integer ("/" integer | "." digits)?

#include <cctype>
#include <cmath>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "weil/rational.hpp"

namespace weil {

enum class Fn { Exp, Log, Sin, Cos, Sqrt };

inline const char* fn_name(Fn f) {
  switch (f) {
    case Fn::Exp: return "exp";
    case Fn::Log: return "log";
    case Fn::Sin: return "sin";
    case Fn::Cos: return "cos";
    case Fn::Sqrt: return "sqrt";
  }
  return "?";
}

class Expr {
 public:
  enum class Kind { Const, Var, Add, Sub, Mul, Div, Neg, Pow, Call };

  static Expr constant(Rat c) {
    auto n = fresh(Kind::Const);
    n->value = std::move(c);
    return Expr(std::move(n));
  }
  static Expr variable(std::size_t index) {
    auto n = fresh(Kind::Var);
    n->var = index;
    return Expr(std::move(n));
  }
  static Expr add(Expr a, Expr b) { return binary(Kind::Add, std::move(a), std::move(b)); }
  static Expr sub(Expr a, Expr b) { return binary(Kind::Sub, std::move(a), std::move(b)); }
  static Expr mul(Expr a, Expr b) { return binary(Kind::Mul, std::move(a), std::move(b)); }
  static Expr div(Expr a, Expr b) { return binary(Kind::Div, std::move(a), std::move(b)); }
  static Expr neg(Expr a) {
    auto n = fresh(Kind::Neg);
    n->kids.push_back(std::move(a));
    return Expr(std::move(n));
  }
  static Expr pow(Expr base, unsigned exponent) {
    auto n = fresh(Kind::Pow);
    n->kids.push_back(std::move(base));
    n->exponent = exponent;
    return Expr(std::move(n));
  }
  static Expr call(Fn f, Expr arg) {
    auto n = fresh(Kind::Call);
    n->fn = f;
    n->kids.push_back(std::move(arg));
    return Expr(std::move(n));
  }

  Kind kind() const { return node_->kind; }
  const Rat& value() const { return node_->value; }
  std::size_t var() const { return node_->var; }
  unsigned exponent() const { return node_->exponent; }
  Fn fn() const { return node_->fn; }
  const Expr& child(std::size_t i) const { return node_->kids[i]; }
  std::size_t child_count() const { return node_->kids.size(); }

 private:
  struct Node {
    Kind kind;
    Rat value;
    std::size_t var = 0;
    unsigned exponent = 0;
    Fn fn = Fn::Exp;
    std::vector<Expr> kids;
  };

  explicit Expr(std::shared_ptr<Node> n) : node_(std::move(n)) {}
  static std::shared_ptr<Node> fresh(Kind k) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    return n;
  }
  static Expr binary(Kind k, Expr a, Expr b) {
    auto n = fresh(k);
    n->kids.push_back(std::move(a));
    n->kids.push_back(std::move(b));
    return Expr(std::move(n));
  }

  std::shared_ptr<const Node> node_;
};

/// True when the tree contains no Div and no Call node: the fragment on
/// which exact evaluation is defined.
inline bool is_polynomial(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Const:
    case Expr::Kind::Var:
      return true;
    case Expr::Kind::Div:
    case Expr::Kind::Call:
      return false;
    default:
      for (std::size_t i = 0; i < e.child_count(); ++i)
        if (!is_polynomial(e.child(i))) return false;
      return true;
  }
}

/// Syntactic total-degree bound for polynomial trees.
inline unsigned degree_bound(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Const: return 0;
    case Expr::Kind::Var: return 1;
    case Expr::Kind::Add:
    case Expr::Kind::Sub:
      return std::max(degree_bound(e.child(0)), degree_bound(e.child(1)));
    case Expr::Kind::Mul:
      return degree_bound(e.child(0)) + degree_bound(e.child(1));
    case Expr::Kind::Neg: return degree_bound(e.child(0));
    case Expr::Kind::Pow: return degree_bound(e.child(0)) * e.exponent();
    default:
      fail(Err::ExactModeUnsupported, "degree bound of a non-polynomial expression");
  }
}

inline std::size_t max_var_index(const Expr& e) {
  std::size_t m = 0;
  if (e.kind() == Expr::Kind::Var) return e.var();
  for (std::size_t i = 0; i < e.child_count(); ++i)
    m = std::max(m, max_var_index(e.child(i)));
  return m;
}

// ---------------------------------------------------------------------------
// Parsing.

class ExprParser {
 public:
  ExprParser(std::string_view text, const std::vector<std::string>& variables)
      : text_(text), vars_(variables) {}

  Expr parse() {
    Expr e = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) error("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void error(const std::string& msg) const {
    fail(Err::ParseError, msg + " at position " + std::to_string(pos_));
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  Expr parse_expr() {
    Expr e = parse_term();
    for (;;) {
      if (eat('+')) e = Expr::add(std::move(e), parse_term());
      else if (eat('-')) e = Expr::sub(std::move(e), parse_term());
      else return e;
    }
  }

  Expr parse_term() {
    Expr e = parse_factor();
    for (;;) {
      if (eat('*')) e = Expr::mul(std::move(e), parse_factor());
      else if (eat('/')) {
        Expr rhs = parse_factor();
        // Fold constant / constant into a rational literal ("3/4" is a
        // number per the grammar); anything else stays a Div node.
        if (e.kind() == Expr::Kind::Const && rhs.kind() == Expr::Kind::Const &&
            !rhs.value().is_zero())
          e = Expr::constant(e.value() / rhs.value());
        else
          e = Expr::div(std::move(e), std::move(rhs));
      } else {
        return e;
      }
    }
  }

  Expr parse_factor() {
    if (eat('-')) return Expr::neg(parse_factor());
    Expr e = parse_atom();
    skip_ws();
    if (eat('^')) {
      skip_ws();
      if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
        error("expected integer exponent after '^'");
      unsigned exp = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        exp = exp * 10 + static_cast<unsigned>(text_[pos_] - '0');
        ++pos_;
      }
      e = Expr::pow(std::move(e), exp);
    }
    return e;
  }

  Expr parse_atom() {
    skip_ws();
    if (pos_ >= text_.size()) error("unexpected end of input");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
    if (eat('(')) {
      Expr e = parse_expr();
      if (!eat(')')) error("expected ')'");
      return e;
    }
    error(std::string("unexpected token '") + c + "'");
  }

  Expr parse_number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
        error("expected digits after decimal point");
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    return Expr::constant(Rat::parse(std::string(text_.substr(start, pos_ - start))));
  }

  Expr parse_ident() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    const std::string name(text_.substr(start, pos_ - start));
    if (peek() == '(') {
      Fn fn;
      if (name == "exp") fn = Fn::Exp;
      else if (name == "log") fn = Fn::Log;
      else if (name == "sin") fn = Fn::Sin;
      else if (name == "cos") fn = Fn::Cos;
      else if (name == "sqrt") fn = Fn::Sqrt;
      else fail(Err::UnknownIdentifier, "unknown function '" + name + "' at position " +
                                            std::to_string(start));
      eat('(');
      Expr arg = parse_expr();
      if (!eat(')')) error("expected ')' after function argument");
      return Expr::call(fn, std::move(arg));
    }
    for (std::size_t i = 0; i < vars_.size(); ++i)
      if (vars_[i] == name) return Expr::variable(i);
    fail(Err::UnknownIdentifier,
         "unknown identifier '" + name + "' at position " + std::to_string(start));
  }

  std::string_view text_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

inline Expr parse_expr(std::string_view text, const std::vector<std::string>& variables) {
  return ExprParser(text, variables).parse();
}

// ---------------------------------------------------------------------------
// Printing (round-trips through the parser).

inline std::string expr_to_string(const Expr& e, const std::vector<std::string>& vars) {
  // Precedence levels: 0 add/sub, 1 mul/div, 2 unary minus, 3 pow/atom.
  struct P {
    const std::vector<std::string>& vars;
    std::string go(const Expr& e, int parent) const {
      auto wrap = [&](int prec, const std::string& s) {
        return prec < parent ? "(" + s + ")" : s;
      };
      switch (e.kind()) {
        case Expr::Kind::Const: {
          const std::string s = e.value().str();
          return e.value().sign() < 0 ? wrap(2, s) : s;
        }
        case Expr::Kind::Var: return vars.at(e.var());
        case Expr::Kind::Add: return wrap(0, go(e.child(0), 0) + " + " + go(e.child(1), 1));
        case Expr::Kind::Sub: return wrap(0, go(e.child(0), 0) + " - " + go(e.child(1), 1));
        case Expr::Kind::Mul: return wrap(1, go(e.child(0), 1) + "*" + go(e.child(1), 2));
        case Expr::Kind::Div: return wrap(1, go(e.child(0), 1) + "/" + go(e.child(1), 2));
        case Expr::Kind::Neg: return wrap(2, "-" + go(e.child(0), 2));
        case Expr::Kind::Pow: return wrap(3, go(e.child(0), 4) + "^" + std::to_string(e.exponent()));
        case Expr::Kind::Call:
          return std::string(fn_name(e.fn())) + "(" + go(e.child(0), 0) + ")";
      }
      return "?";
    }
  };
  return P{vars}.go(e, 0);
}

/// Substitutes replacement expressions for variables (used to compose maps).
inline Expr substitute(const Expr& e, const std::vector<Expr>& replacements) {
  switch (e.kind()) {
    case Expr::Kind::Const: return e;
    case Expr::Kind::Var:
      if (e.var() >= replacements.size())
        fail(Err::UsageError, "substitute: variable index out of range");
      return replacements[e.var()];
    case Expr::Kind::Add:
      return Expr::add(substitute(e.child(0), replacements), substitute(e.child(1), replacements));
    case Expr::Kind::Sub:
      return Expr::sub(substitute(e.child(0), replacements), substitute(e.child(1), replacements));
    case Expr::Kind::Mul:
      return Expr::mul(substitute(e.child(0), replacements), substitute(e.child(1), replacements));
    case Expr::Kind::Div:
      return Expr::div(substitute(e.child(0), replacements), substitute(e.child(1), replacements));
    case Expr::Kind::Neg: return Expr::neg(substitute(e.child(0), replacements));
    case Expr::Kind::Pow: return Expr::pow(substitute(e.child(0), replacements), e.exponent());
    case Expr::Kind::Call: return Expr::call(e.fn(), substitute(e.child(0), replacements));
  }
  fail(Err::UsageError, "substitute: bad node");
}

// ---------------------------------------------------------------------------
// Scalar evaluation at a point.

inline Rat eval_exact(const Expr& e, const std::vector<Rat>& x) {
  switch (e.kind()) {
    case Expr::Kind::Const: return e.value();
    case Expr::Kind::Var: return x.at(e.var());
    case Expr::Kind::Add: return eval_exact(e.child(0), x) + eval_exact(e.child(1), x);
    case Expr::Kind::Sub: return eval_exact(e.child(0), x) - eval_exact(e.child(1), x);
    case Expr::Kind::Mul: return eval_exact(e.child(0), x) * eval_exact(e.child(1), x);
    case Expr::Kind::Div: {
      const Rat d = eval_exact(e.child(1), x);
      if (d.is_zero()) fail(Err::PoleAtPoint, "exact division by zero");
      return eval_exact(e.child(0), x) / d;
    }
    case Expr::Kind::Neg: return -eval_exact(e.child(0), x);
    case Expr::Kind::Pow: {
      Rat b = eval_exact(e.child(0), x);
      Rat r(1);
      for (unsigned i = 0; i < e.exponent(); ++i) r *= b;
      return r;
    }
    case Expr::Kind::Call:
      fail(Err::ExactModeUnsupported, "elementary call in exact evaluation");
  }
  fail(Err::UsageError, "eval_exact: bad node");
}

inline double eval_double(const Expr& e, const std::vector<double>& x) {
  switch (e.kind()) {
    case Expr::Kind::Const: return e.value().to_double();
    case Expr::Kind::Var: return x.at(e.var());
    case Expr::Kind::Add: return eval_double(e.child(0), x) + eval_double(e.child(1), x);
    case Expr::Kind::Sub: return eval_double(e.child(0), x) - eval_double(e.child(1), x);
    case Expr::Kind::Mul: return eval_double(e.child(0), x) * eval_double(e.child(1), x);
    case Expr::Kind::Div: {
      const double d = eval_double(e.child(1), x);
      if (d == 0.0) fail(Err::PoleAtPoint, "division by zero");
      return eval_double(e.child(0), x) / d;
    }
    case Expr::Kind::Neg: return -eval_double(e.child(0), x);
    case Expr::Kind::Pow: return std::pow(eval_double(e.child(0), x), e.exponent());
    case Expr::Kind::Call: {
      const double a = eval_double(e.child(0), x);
      switch (e.fn()) {
        case Fn::Exp: return std::exp(a);
        case Fn::Log:
          if (a <= 0.0) fail(Err::DomainError, "log of non-positive value");
          return std::log(a);
        case Fn::Sin: return std::sin(a);
        case Fn::Cos: return std::cos(a);
        case Fn::Sqrt:
          if (a < 0.0) fail(Err::DomainError, "sqrt of negative value");
          return std::sqrt(a);
      }
      break;
    }
  }
  fail(Err::UsageError, "eval_double: bad node");
}

}  // namespace weil
