#pragma once

#include <cctype>
#include <cmath>
#include <cstdio>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <variant>

#include "enteq/errors.hpp"

// Expression language for user-supplied scalar functions of the vectors
// x, y, z (solutions) or s (psi terms).  Grammar:
//
//   expr  := term (("+"|"-") term)*
//   term  := unary (("*"|"/") unary)*
//   unary := "-" unary | power
//   power := atom ("^" unary)?
//   atom  := number | const | var | func "(" expr ")" | "(" expr ")"
//   var   := ("x"|"y"|"z"|"s") "[" integer "]"
//
// Constants: e, pi.  Functions: ln, log2, log10, exp, abs.  Whitespace is
// insignificant.  "^" is right-associative and binds tighter than unary
// minus, so -2^2 = -(2^2).

namespace enteq::dsl {

struct SourcePos {
  int line = 1;
  int column = 1;
};

enum class Var : int { X = 0, Y = 1, Z = 2, S = 3 };
enum class BinOp { Add, Sub, Mul, Div, Pow };
enum class Func { Ln, Log2, Log10, Exp, Abs };

inline const char* var_name(Var v) {
  switch (v) {
    case Var::X: return "x";
    case Var::Y: return "y";
    case Var::Z: return "z";
    default: return "s";
  }
}

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct Number {
  double value;  // nonnegative; negative values arise only via Neg nodes
};
struct Constant {
  std::string name;  // "e" | "pi"
};
struct VarRef {
  Var var;
  int index;
};
struct Neg {
  ExprPtr operand;
};
struct Binary {
  BinOp op;
  ExprPtr lhs;
  ExprPtr rhs;
};
struct Call {
  Func func;
  ExprPtr arg;
};

struct Expr {
  std::variant<Number, Constant, VarRef, Neg, Binary, Call> node;
  SourcePos pos;
};

/// Which variables a parsing context admits (psi sees only s, a solution
/// body sees x/y/z, an associativity kernel sees x/y standing for u/v).
struct VarSet {
  bool x = false, y = false, z = false, s = false;
  static VarSet xyz() { return {true, true, true, false}; }
  static VarSet xy() { return {true, true, false, false}; }
  static VarSet s_only() { return {false, false, false, true}; }
  bool allows(Var v) const {
    switch (v) {
      case Var::X: return x;
      case Var::Y: return y;
      case Var::Z: return z;
      default: return s;
    }
  }
};

// --- construction helpers ---------------------------------------------------

inline ExprPtr make(Expr e) { return std::make_unique<Expr>(std::move(e)); }

inline ExprPtr clone(const Expr& e);

namespace detail {
struct CloneVisitor {
  SourcePos pos;
  ExprPtr operator()(const Number& n) const { return make({n, pos}); }
  ExprPtr operator()(const Constant& c) const { return make({c, pos}); }
  ExprPtr operator()(const VarRef& v) const { return make({v, pos}); }
  ExprPtr operator()(const Neg& n) const {
    return make({Neg{clone(*n.operand)}, pos});
  }
  ExprPtr operator()(const Binary& b) const {
    return make({Binary{b.op, clone(*b.lhs), clone(*b.rhs)}, pos});
  }
  ExprPtr operator()(const Call& c) const {
    return make({Call{c.func, clone(*c.arg)}, pos});
  }
};
}  // namespace detail

inline ExprPtr clone(const Expr& e) {
  return std::visit(detail::CloneVisitor{e.pos}, e.node);
}

/// Structural equality; numeric literals compare bitwise.
inline bool equal(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  if (const auto* n = std::get_if<Number>(&a.node))
    return n->value == std::get<Number>(b.node).value;
  if (const auto* c = std::get_if<Constant>(&a.node))
    return c->name == std::get<Constant>(b.node).name;
  if (const auto* v = std::get_if<VarRef>(&a.node)) {
    const auto& w = std::get<VarRef>(b.node);
    return v->var == w.var && v->index == w.index;
  }
  if (const auto* n = std::get_if<Neg>(&a.node))
    return equal(*n->operand, *std::get<Neg>(b.node).operand);
  if (const auto* x = std::get_if<Binary>(&a.node)) {
    const auto& y = std::get<Binary>(b.node);
    return x->op == y.op && equal(*x->lhs, *y.lhs) && equal(*x->rhs, *y.rhs);
  }
  const auto& f = std::get<Call>(a.node);
  const auto& g = std::get<Call>(b.node);
  return f.func == g.func && equal(*f.arg, *g.arg);
}

// --- printing ----------------------------------------------------------------

namespace detail {

// precedence: + - (1) | * / (2) | unary - (3) | ^ (4) | atoms (6)
inline int prec(const Expr& e) {
  if (std::holds_alternative<Binary>(e.node)) {
    switch (std::get<Binary>(e.node).op) {
      case BinOp::Add:
      case BinOp::Sub: return 1;
      case BinOp::Mul:
      case BinOp::Div: return 2;
      case BinOp::Pow: return 4;
    }
  }
  if (std::holds_alternative<Neg>(e.node)) return 3;
  return 6;
}

inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void print_to(const Expr& e, std::string& out);

inline void print_child(const Expr& c, bool parens, std::string& out) {
  if (parens) out += '(';
  print_to(c, out);
  if (parens) out += ')';
}

inline void print_to(const Expr& e, std::string& out) {
  if (const auto* n = std::get_if<Number>(&e.node)) {
    out += format_number(n->value);
  } else if (const auto* c = std::get_if<Constant>(&e.node)) {
    out += c->name;
  } else if (const auto* v = std::get_if<VarRef>(&e.node)) {
    out += var_name(v->var);
    out += '[';
    out += std::to_string(v->index);
    out += ']';
  } else if (const auto* n = std::get_if<Neg>(&e.node)) {
    out += '-';
    print_child(*n->operand, prec(*n->operand) < 3, out);
  } else if (const auto* b = std::get_if<Binary>(&e.node)) {
    if (b->op == BinOp::Pow) {
      // base must be an atom; exponent must be unary level
      print_child(*b->lhs, prec(*b->lhs) < 6, out);
      out += '^';
      print_child(*b->rhs, prec(*b->rhs) < 3, out);
    } else {
      const int p = (b->op == BinOp::Add || b->op == BinOp::Sub) ? 1 : 2;
      print_child(*b->lhs, prec(*b->lhs) < p, out);
      switch (b->op) {
        case BinOp::Add: out += " + "; break;
        case BinOp::Sub: out += " - "; break;
        case BinOp::Mul: out += "*"; break;
        default: out += "/"; break;
      }
      // left-associative: an equal-precedence right child needs parens
      print_child(*b->rhs, prec(*b->rhs) <= p, out);
    }
  } else {
    const auto& c = std::get<Call>(e.node);
    switch (c.func) {
      case Func::Ln: out += "ln"; break;
      case Func::Log2: out += "log2"; break;
      case Func::Log10: out += "log10"; break;
      case Func::Exp: out += "exp"; break;
      case Func::Abs: out += "abs"; break;
    }
    out += '(';
    print_to(*c.arg, out);
    out += ')';
  }
}

}  // namespace detail

/// Prints with the fewest parentheses that re-parse to the same tree.
inline std::string print(const Expr& e) {
  std::string out;
  detail::print_to(e, out);
  return out;
}

// --- parsing -----------------------------------------------------------------

namespace detail {

enum class Tok {
  Number, Ident, Plus, Minus, Star, Slash, Caret,
  LParen, RParen, LBracket, RBracket, End
};

struct Token {
  Tok kind = Tok::End;
  double number = 0.0;
  std::string text;
  SourcePos pos;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    while (i_ < src_.size() && is_space(src_[i_])) advance();
    Token t;
    t.pos = {line_, col_};
    if (i_ >= src_.size()) {
      t.kind = Tok::End;
      return t;
    }
    const char c = src_[i_];
    switch (c) {
      case '+': advance(); t.kind = Tok::Plus; return t;
      case '-': advance(); t.kind = Tok::Minus; return t;
      case '*': advance(); t.kind = Tok::Star; return t;
      case '/': advance(); t.kind = Tok::Slash; return t;
      case '^': advance(); t.kind = Tok::Caret; return t;
      case '(': advance(); t.kind = Tok::LParen; return t;
      case ')': advance(); t.kind = Tok::RParen; return t;
      case '[': advance(); t.kind = Tok::LBracket; return t;
      case ']': advance(); t.kind = Tok::RBracket; return t;
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i_ + 1 < src_.size() &&
         std::isdigit(static_cast<unsigned char>(src_[i_ + 1])))) {
      return lex_number(t);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = i_;
      while (i_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[i_])) ||
              src_[i_] == '_'))
        advance();
      t.kind = Tok::Ident;
      t.text = std::string(src_.substr(start, i_ - start));
      return t;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line_,
                     col_);
  }

 private:
  static bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n';
  }
  void advance() {
    if (src_[i_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++i_;
  }
  Token lex_number(Token t) {
    const std::size_t start = i_;
    while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_])))
      advance();
    if (i_ < src_.size() && src_[i_] == '.') {
      advance();
      while (i_ < src_.size() &&
             std::isdigit(static_cast<unsigned char>(src_[i_])))
        advance();
    }
    // exponent part only when actually followed by digits
    if (i_ < src_.size() && (src_[i_] == 'e' || src_[i_] == 'E')) {
      std::size_t j = i_ + 1;
      if (j < src_.size() && (src_[j] == '+' || src_[j] == '-')) ++j;
      if (j < src_.size() && std::isdigit(static_cast<unsigned char>(src_[j]))) {
        while (i_ < j) advance();
        while (i_ < src_.size() &&
               std::isdigit(static_cast<unsigned char>(src_[i_])))
          advance();
      }
    }
    t.kind = Tok::Number;
    t.text = std::string(src_.substr(start, i_ - start));
    t.number = std::strtod(t.text.c_str(), nullptr);
    return t;
  }

  std::string_view src_;
  std::size_t i_ = 0;
  int line_ = 1, col_ = 1;
};

class Parser {
 public:
  Parser(std::string_view src, int k, VarSet allowed)
      : lexer_(src), k_(k), allowed_(allowed) {
    cur_ = lexer_.next();
  }

  Expr parse_all() {
    Expr e = parse_expr();
    if (cur_.kind != Tok::End)
      throw ParseError("unexpected trailing input", cur_.pos.line,
                       cur_.pos.column);
    return e;
  }

 private:
  Expr parse_expr() {
    Expr lhs = parse_term();
    while (cur_.kind == Tok::Plus || cur_.kind == Tok::Minus) {
      const BinOp op = cur_.kind == Tok::Plus ? BinOp::Add : BinOp::Sub;
      const SourcePos pos = cur_.pos;
      bump();
      Expr rhs = parse_term();
      lhs = Expr{Binary{op, make(std::move(lhs)), make(std::move(rhs))}, pos};
    }
    return lhs;
  }

  Expr parse_term() {
    Expr lhs = parse_unary();
    while (cur_.kind == Tok::Star || cur_.kind == Tok::Slash) {
      const BinOp op = cur_.kind == Tok::Star ? BinOp::Mul : BinOp::Div;
      const SourcePos pos = cur_.pos;
      bump();
      Expr rhs = parse_unary();
      lhs = Expr{Binary{op, make(std::move(lhs)), make(std::move(rhs))}, pos};
    }
    return lhs;
  }

  Expr parse_unary() {
    if (cur_.kind == Tok::Minus) {
      const SourcePos pos = cur_.pos;
      bump();
      Expr operand = parse_unary();
      return Expr{Neg{make(std::move(operand))}, pos};
    }
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_atom();
    if (cur_.kind == Tok::Caret) {
      const SourcePos pos = cur_.pos;
      bump();
      Expr exponent = parse_unary();  // right-associative
      return Expr{
          Binary{BinOp::Pow, make(std::move(base)), make(std::move(exponent))},
          pos};
    }
    return base;
  }

  Expr parse_atom() {
    const Token t = cur_;
    switch (t.kind) {
      case Tok::Number:
        bump();
        return Expr{Number{t.number}, t.pos};
      case Tok::LParen: {
        bump();
        Expr e = parse_expr();
        expect(Tok::RParen, "expected ')'");
        return e;
      }
      case Tok::Ident:
        bump();
        return parse_ident(t);
      default:
        throw ParseError("expected a number, constant, variable, function or "
                         "'('",
                         t.pos.line, t.pos.column);
    }
  }

  Expr parse_ident(const Token& t) {
    if (t.text == "e" || t.text == "pi") return Expr{Constant{t.text}, t.pos};
    if (t.text == "x" || t.text == "y" || t.text == "z" || t.text == "s")
      return parse_var(t);
    Func f;
    if (t.text == "ln") f = Func::Ln;
    else if (t.text == "log2") f = Func::Log2;
    else if (t.text == "log10") f = Func::Log10;
    else if (t.text == "exp") f = Func::Exp;
    else if (t.text == "abs") f = Func::Abs;
    else
      throw ParseError("unknown identifier '" + t.text + "'", t.pos.line,
                       t.pos.column);
    expect(Tok::LParen, "expected '(' after function name");
    Expr arg = parse_expr();
    expect(Tok::RParen, "expected ')'");
    return Expr{Call{f, make(std::move(arg))}, t.pos};
  }

  Expr parse_var(const Token& t) {
    const Var v = t.text == "x"   ? Var::X
                  : t.text == "y" ? Var::Y
                  : t.text == "z" ? Var::Z
                                  : Var::S;
    if (!allowed_.allows(v))
      throw ParseError("variable '" + t.text + "' is not available in this "
                       "context",
                       t.pos.line, t.pos.column);
    expect(Tok::LBracket, "expected '[' after variable name");
    const Token idx = cur_;
    if (idx.kind != Tok::Number || idx.number != std::floor(idx.number) ||
        idx.text.find_first_of(".eE") != std::string::npos || idx.number < 0)
      throw ParseError("variable index must be a nonnegative integer",
                       idx.pos.line, idx.pos.column);
    const int i = static_cast<int>(idx.number);
    if (i >= k_)
      throw ParseError("index " + std::to_string(i) + " out of range for "
                       "dimension k=" + std::to_string(k_),
                       idx.pos.line, idx.pos.column);
    bump();
    expect(Tok::RBracket, "expected ']'");
    return Expr{VarRef{v, i}, t.pos};
  }

  void expect(Tok kind, const char* msg) {
    if (cur_.kind != kind)
      throw ParseError(msg, cur_.pos.line, cur_.pos.column);
    bump();
  }
  void bump() { cur_ = lexer_.next(); }

  Lexer lexer_;
  Token cur_;
  int k_;
  VarSet allowed_;
};

}  // namespace detail

inline Expr parse(std::string_view source, int k, VarSet allowed) {
  if (source.empty()) throw ParseError("empty expression", 1, 1);
  if (k < 1) throw DimensionError("parse: dimension must be >= 1");
  return detail::Parser(source, k, allowed).parse_all();
}

// --- evaluation ----------------------------------------------------------------

struct Bindings {
  std::span<const double> x, y, z, s;

  static Bindings bind_s(std::span<const double> sv) {
    Bindings b;
    b.s = sv;
    return b;
  }
  static Bindings bind_xy(std::span<const double> xv,
                          std::span<const double> yv) {
    Bindings b;
    b.x = xv;
    b.y = yv;
    return b;
  }
  static Bindings bind_xyz(std::span<const double> xv,
                           std::span<const double> yv,
                           std::span<const double> zv) {
    Bindings b = bind_xy(xv, yv);
    b.z = zv;
    return b;
  }

  std::span<const double> get(Var v) const {
    switch (v) {
      case Var::X: return x;
      case Var::Y: return y;
      case Var::Z: return z;
      default: return s;
    }
  }
};

/// IEEE double evaluation with a fixed left-to-right operand order.
/// Domain errors carry the offending subexpression in the message.
inline double eval(const Expr& e, const Bindings& b) {
  if (const auto* n = std::get_if<Number>(&e.node)) return n->value;
  if (const auto* c = std::get_if<Constant>(&e.node))
    return c->name == "e" ? std::numbers::e : std::numbers::pi;
  if (const auto* v = std::get_if<VarRef>(&e.node)) {
    const auto sp = b.get(v->var);
    if (sp.empty())
      throw DomainError(std::string("variable '") + var_name(v->var) +
                        "' is not bound");
    if (static_cast<std::size_t>(v->index) >= sp.size())
      throw DimensionError("variable index out of range in '" + print(e) + "'");
    return sp[static_cast<std::size_t>(v->index)];
  }
  if (const auto* n = std::get_if<Neg>(&e.node)) return -eval(*n->operand, b);
  if (const auto* bin = std::get_if<Binary>(&e.node)) {
    const double l = eval(*bin->lhs, b);
    const double r = eval(*bin->rhs, b);
    switch (bin->op) {
      case BinOp::Add: return l + r;
      case BinOp::Sub: return l - r;
      case BinOp::Mul: return l * r;
      case BinOp::Div:
        if (r == 0.0)
          throw DomainError("division by zero in '" + print(e) + "'");
        return l / r;
      case BinOp::Pow:
        if (l == 0.0 && r < 0.0)
          throw DomainError("0 raised to a negative power in '" + print(e) +
                            "'");
        if (l < 0.0 && r != std::floor(r))
          throw DomainError("negative base with non-integer exponent in '" +
                            print(e) + "'");
        return std::pow(l, r);
    }
  }
  const auto& c = std::get<Call>(e.node);
  const double a = eval(*c.arg, b);
  switch (c.func) {
    case Func::Ln:
      if (!(a > 0.0))
        throw DomainError("ln of a nonpositive value in '" + print(e) + "'");
      return std::log(a);
    case Func::Log2:
      if (!(a > 0.0))
        throw DomainError("log2 of a nonpositive value in '" + print(e) + "'");
      return std::log2(a);
    case Func::Log10:
      if (!(a > 0.0))
        throw DomainError("log10 of a nonpositive value in '" + print(e) + "'");
      return std::log10(a);
    case Func::Exp: return std::exp(a);
    default: return std::fabs(a);
  }
}

}  // namespace enteq::dsl
