#pragma once

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "codazzi/errors.hpp"

namespace codazzi {

// ---------------------------------------------------------------------------
// Expression trees.
//
// Closed-form expressions over the coordinates of a chart: constants,
// coordinate variables, the unary functions sin cos tan sinh cosh exp log
// sqrt, negation, the four arithmetic operators and integer powers. Nodes are
// immutable and shared, so derivatives and tensor pipelines build DAGs rather
// than exploding copies. All operations on Expr are pure.
// ---------------------------------------------------------------------------

enum class ExprKind {
  Constant,
  Variable,
  Negate,
  Sin,
  Cos,
  Tan,
  Sinh,
  Cosh,
  Exp,
  Log,
  Sqrt,
  Add,
  Sub,
  Mul,
  Div,
  IntPow,
};

struct ExprNode;
using ExprNodePtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  ExprKind kind;
  double value = 0.0;      // Constant
  int var_index = -1;      // Variable: position in the chart's coordinate list
  std::string var_name;    // Variable
  int exponent = 0;        // IntPow
  ExprNodePtr a;           // operand / lhs
  ExprNodePtr b;           // rhs
};

class Expr {
 public:
  Expr() : node_(zero_node()) {}
  explicit Expr(ExprNodePtr node) : node_(std::move(node)) {}

  static Expr constant(double v) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::Constant;
    n->value = v;
    return Expr(std::move(n));
  }

  static Expr variable(std::string name, int index) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::Variable;
    n->var_name = std::move(name);
    n->var_index = index;
    return Expr(std::move(n));
  }

  const ExprNode& node() const { return *node_; }
  const ExprNodePtr& ptr() const { return node_; }

  bool is_constant() const { return node_->kind == ExprKind::Constant; }
  bool is_constant(double v) const { return is_constant() && node_->value == v; }
  bool is_zero() const { return is_constant(0.0); }

 private:
  static const ExprNodePtr& zero_node() {
    static const ExprNodePtr z = [] {
      auto n = std::make_shared<ExprNode>();
      n->kind = ExprKind::Constant;
      n->value = 0.0;
      return ExprNodePtr(n);
    }();
    return z;
  }

  ExprNodePtr node_;
};

namespace detail {

inline Expr make_unary(ExprKind kind, const Expr& x) {
  auto n = std::make_shared<ExprNode>();
  n->kind = kind;
  n->a = x.ptr();
  return Expr(std::move(n));
}

inline Expr make_binary(ExprKind kind, const Expr& x, const Expr& y) {
  auto n = std::make_shared<ExprNode>();
  n->kind = kind;
  n->a = x.ptr();
  n->b = y.ptr();
  return Expr(std::move(n));
}

inline bool fold_unary(ExprKind kind, double x, double& out) {
  switch (kind) {
    case ExprKind::Negate: out = -x; return true;
    case ExprKind::Sin: out = std::sin(x); return true;
    case ExprKind::Cos: out = std::cos(x); return true;
    case ExprKind::Tan: out = std::tan(x); return true;
    case ExprKind::Sinh: out = std::sinh(x); return true;
    case ExprKind::Cosh: out = std::cosh(x); return true;
    case ExprKind::Exp: out = std::exp(x); return true;
    case ExprKind::Log:
      if (x <= 0.0) return false;
      out = std::log(x);
      return true;
    case ExprKind::Sqrt:
      if (x < 0.0) return false;
      out = std::sqrt(x);
      return true;
    default: return false;
  }
}

}  // namespace detail

// Smart constructors. Simplification is deliberately minimal: constant
// folding plus the 0/1 identities, enough that derivative-of-constant
// collapses to the zero constant and sparse tensor pipelines stay sparse.

inline Expr operator+(const Expr& x, const Expr& y) {
  if (x.is_constant() && y.is_constant())
    return Expr::constant(x.node().value + y.node().value);
  if (x.is_zero()) return y;
  if (y.is_zero()) return x;
  return detail::make_binary(ExprKind::Add, x, y);
}

inline Expr operator-(const Expr& x) {
  if (x.is_constant()) return Expr::constant(-x.node().value);
  if (x.node().kind == ExprKind::Negate) return Expr(x.node().a);
  return detail::make_unary(ExprKind::Negate, x);
}

inline Expr operator-(const Expr& x, const Expr& y) {
  if (x.is_constant() && y.is_constant())
    return Expr::constant(x.node().value - y.node().value);
  if (y.is_zero()) return x;
  if (x.is_zero()) return -y;
  return detail::make_binary(ExprKind::Sub, x, y);
}

inline Expr operator*(const Expr& x, const Expr& y) {
  if (x.is_constant() && y.is_constant())
    return Expr::constant(x.node().value * y.node().value);
  if (x.is_zero() || y.is_zero()) return Expr::constant(0.0);
  if (x.is_constant(1.0)) return y;
  if (y.is_constant(1.0)) return x;
  return detail::make_binary(ExprKind::Mul, x, y);
}

inline Expr operator/(const Expr& x, const Expr& y) {
  if (x.is_constant() && y.is_constant() && y.node().value != 0.0) {
    double v = x.node().value / y.node().value;
    if (std::isfinite(v)) return Expr::constant(v);
  }
  if (x.is_zero() && !y.is_zero()) return Expr::constant(0.0);
  if (y.is_constant(1.0)) return x;
  return detail::make_binary(ExprKind::Div, x, y);
}

inline Expr int_pow(const Expr& x, int k) {
  if (k == 0) return Expr::constant(1.0);
  if (k == 1) return x;
  if (x.is_constant()) {
    double v = std::pow(x.node().value, static_cast<double>(k));
    if (std::isfinite(v)) return Expr::constant(v);
  }
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprKind::IntPow;
  n->exponent = k;
  n->a = x.ptr();
  return Expr(std::move(n));
}

#define CODAZZI_UNARY_FN(fn, kind)                                  \
  inline Expr fn(const Expr& x) {                                   \
    if (x.is_constant()) {                                          \
      double out;                                                   \
      if (detail::fold_unary(ExprKind::kind, x.node().value, out) &&\
          std::isfinite(out))                                       \
        return Expr::constant(out);                                 \
    }                                                               \
    return detail::make_unary(ExprKind::kind, x);                   \
  }

CODAZZI_UNARY_FN(sin, Sin)
CODAZZI_UNARY_FN(cos, Cos)
CODAZZI_UNARY_FN(tan, Tan)
CODAZZI_UNARY_FN(sinh, Sinh)
CODAZZI_UNARY_FN(cosh, Cosh)
CODAZZI_UNARY_FN(exp, Exp)
CODAZZI_UNARY_FN(log, Log)
CODAZZI_UNARY_FN(sqrt, Sqrt)

#undef CODAZZI_UNARY_FN

/// Structural equality (same tree shape, same constants, same variables).
inline bool structurally_equal(const Expr& x, const Expr& y) {
  const ExprNode* p = &x.node();
  const ExprNode* q = &y.node();
  if (p == q) return true;
  if (p->kind != q->kind) return false;
  switch (p->kind) {
    case ExprKind::Constant: return p->value == q->value;
    case ExprKind::Variable: return p->var_index == q->var_index && p->var_name == q->var_name;
    case ExprKind::IntPow:
      return p->exponent == q->exponent && structurally_equal(Expr(p->a), Expr(q->a));
    default:
      if (p->a && !structurally_equal(Expr(p->a), Expr(q->a))) return false;
      if (p->b && !structurally_equal(Expr(p->b), Expr(q->b))) return false;
      return true;
  }
}

// ---------------------------------------------------------------------------
// Printing. The printer emits text that parses back to an equivalent tree.
// ---------------------------------------------------------------------------

namespace detail {

inline std::string format_double(double v) {
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

inline int precedence(const ExprNode& n) {
  switch (n.kind) {
    case ExprKind::Add:
    case ExprKind::Sub: return 1;
    case ExprKind::Mul:
    case ExprKind::Div: return 2;
    case ExprKind::Negate: return 3;
    case ExprKind::IntPow: return 4;
    default: return 5;
  }
}

inline void print_node(const ExprNode& n, std::string& out);

inline void print_child(const ExprNode& child, int min_prec, std::string& out) {
  bool paren = precedence(child) < min_prec ||
               (child.kind == ExprKind::Constant && child.value < 0.0);
  if (paren) out.push_back('(');
  print_node(child, out);
  if (paren) out.push_back(')');
}

inline void print_node(const ExprNode& n, std::string& out) {
  switch (n.kind) {
    case ExprKind::Constant: out += format_double(n.value); break;
    case ExprKind::Variable: out += n.var_name; break;
    case ExprKind::Negate:
      out.push_back('-');
      print_child(*n.a, 4, out);
      break;
    case ExprKind::Add:
      print_child(*n.a, 1, out);
      out += " + ";
      print_child(*n.b, 2, out);  // re-parsing must not re-associate
      break;
    case ExprKind::Sub:
      print_child(*n.a, 1, out);
      out += " - ";
      print_child(*n.b, 2, out);
      break;
    case ExprKind::Mul:
      print_child(*n.a, 2, out);
      out += " * ";
      print_child(*n.b, 3, out);
      break;
    case ExprKind::Div:
      print_child(*n.a, 2, out);
      out += " / ";
      print_child(*n.b, 3, out);
      break;
    case ExprKind::IntPow: {
      print_child(*n.a, 5, out);
      out.push_back('^');
      if (n.exponent < 0) {
        out.push_back('(');
        out += std::to_string(n.exponent);
        out.push_back(')');
      } else {
        out += std::to_string(n.exponent);
      }
      break;
    }
    default: {
      const char* name = "";
      switch (n.kind) {
        case ExprKind::Sin: name = "sin"; break;
        case ExprKind::Cos: name = "cos"; break;
        case ExprKind::Tan: name = "tan"; break;
        case ExprKind::Sinh: name = "sinh"; break;
        case ExprKind::Cosh: name = "cosh"; break;
        case ExprKind::Exp: name = "exp"; break;
        case ExprKind::Log: name = "log"; break;
        case ExprKind::Sqrt: name = "sqrt"; break;
        default: break;
      }
      out += name;
      out.push_back('(');
      print_node(*n.a, out);
      out.push_back(')');
      break;
    }
  }
}

}  // namespace detail

inline std::string to_string(const Expr& e) {
  std::string out;
  detail::print_node(e.node(), out);
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation. Shared subtrees are evaluated once per call via a pointer-keyed
// memo, so DAG-shaped curvature expressions stay cheap.
// ---------------------------------------------------------------------------

class Evaluator {
 public:
  explicit Evaluator(std::vector<double> point) : point_(std::move(point)) {}

  double eval(const Expr& e) { return eval_node(e.node()); }

 private:
  [[noreturn]] void domain_error(const ExprNode& n, const std::string& what) {
    std::string msg = "domain error: " + what + " in '";
    detail::print_node(n, msg);
    msg += "' at point (";
    for (std::size_t i = 0; i < point_.size(); ++i) {
      if (i) msg += ", ";
      msg += detail::format_double(point_[i]);
    }
    msg += ")";
    throw DomainError(msg);
  }

  double eval_node(const ExprNode& n) {
    if (n.kind == ExprKind::Constant) return n.value;
    if (n.kind == ExprKind::Variable) {
      if (n.var_index < 0 || static_cast<std::size_t>(n.var_index) >= point_.size())
        throw DomainError("variable '" + n.var_name + "' out of range for point");
      return point_[static_cast<std::size_t>(n.var_index)];
    }
    auto it = memo_.find(&n);
    if (it != memo_.end()) return it->second;

    double r = 0.0;
    switch (n.kind) {
      case ExprKind::Add: r = eval_node(*n.a) + eval_node(*n.b); break;
      case ExprKind::Sub: r = eval_node(*n.a) - eval_node(*n.b); break;
      case ExprKind::Mul: r = eval_node(*n.a) * eval_node(*n.b); break;
      case ExprKind::Div: {
        double num = eval_node(*n.a);
        double den = eval_node(*n.b);
        if (den == 0.0) domain_error(n, "division by zero");
        r = num / den;
        break;
      }
      case ExprKind::IntPow: {
        double base = eval_node(*n.a);
        if (base == 0.0 && n.exponent < 0) domain_error(n, "zero base with negative exponent");
        r = std::pow(base, static_cast<double>(n.exponent));
        break;
      }
      case ExprKind::Log: {
        double x = eval_node(*n.a);
        if (x <= 0.0) domain_error(n, "log of non-positive value");
        r = std::log(x);
        break;
      }
      case ExprKind::Sqrt: {
        double x = eval_node(*n.a);
        if (x < 0.0) domain_error(n, "sqrt of negative value");
        r = std::sqrt(x);
        break;
      }
      case ExprKind::Negate: r = -eval_node(*n.a); break;
      case ExprKind::Sin: r = std::sin(eval_node(*n.a)); break;
      case ExprKind::Cos: r = std::cos(eval_node(*n.a)); break;
      case ExprKind::Tan: r = std::tan(eval_node(*n.a)); break;
      case ExprKind::Sinh: r = std::sinh(eval_node(*n.a)); break;
      case ExprKind::Cosh: r = std::cosh(eval_node(*n.a)); break;
      case ExprKind::Exp: r = std::exp(eval_node(*n.a)); break;
      default: break;
    }
    if (!std::isfinite(r)) domain_error(n, "non-finite result");
    memo_.emplace(&n, r);
    return r;
  }

  std::vector<double> point_;
  std::unordered_map<const ExprNode*, double> memo_;
};

inline double evaluate(const Expr& e, const std::vector<double>& point) {
  Evaluator ev(point);
  return ev.eval(e);
}

// ---------------------------------------------------------------------------
// Exact symbolic differentiation. Total on well-formed expressions.
// ---------------------------------------------------------------------------

class Differentiator {
 public:
  explicit Differentiator(int var_index) : var_(var_index) {}

  Expr diff(const Expr& e) {
    auto it = memo_.find(&e.node());
    if (it != memo_.end()) return it->second;
    Expr d = diff_node(e.node());
    memo_.emplace(&e.node(), d);
    return d;
  }

 private:
  Expr diff_node(const ExprNode& n) {
    switch (n.kind) {
      case ExprKind::Constant: return Expr::constant(0.0);
      case ExprKind::Variable:
        return Expr::constant(n.var_index == var_ ? 1.0 : 0.0);
      case ExprKind::Add: return diff(Expr(n.a)) + diff(Expr(n.b));
      case ExprKind::Sub: return diff(Expr(n.a)) - diff(Expr(n.b));
      case ExprKind::Mul: {
        Expr u(n.a), v(n.b);
        return diff(u) * v + u * diff(v);
      }
      case ExprKind::Div: {
        Expr u(n.a), v(n.b);
        return (diff(u) * v - u * diff(v)) / int_pow(v, 2);
      }
      case ExprKind::IntPow: {
        Expr u(n.a);
        return Expr::constant(static_cast<double>(n.exponent)) *
               int_pow(u, n.exponent - 1) * diff(u);
      }
      case ExprKind::Negate: return -diff(Expr(n.a));
      case ExprKind::Sin: return cos(Expr(n.a)) * diff(Expr(n.a));
      case ExprKind::Cos: return -(sin(Expr(n.a)) * diff(Expr(n.a)));
      case ExprKind::Tan:
        return diff(Expr(n.a)) / int_pow(cos(Expr(n.a)), 2);
      case ExprKind::Sinh: return cosh(Expr(n.a)) * diff(Expr(n.a));
      case ExprKind::Cosh: return sinh(Expr(n.a)) * diff(Expr(n.a));
      case ExprKind::Exp: return exp(Expr(n.a)) * diff(Expr(n.a));
      case ExprKind::Log: return diff(Expr(n.a)) / Expr(n.a);
      case ExprKind::Sqrt:
        return diff(Expr(n.a)) / (Expr::constant(2.0) * sqrt(Expr(n.a)));
    }
    return Expr::constant(0.0);
  }

  int var_;
  std::unordered_map<const ExprNode*, Expr> memo_;
};

inline Expr differentiate(const Expr& e, int var_index) {
  Differentiator d(var_index);
  return d.diff(e);
}

// ---------------------------------------------------------------------------
// Parser. Grammar (highest precedence last):
//
//   expression := term { ('+' | '-') term }
//   term       := factor { ('*' | '/') factor }
//   factor     := '-' factor | power
//   power      := atom [ '^' factor ]          (right associative)
//   atom       := number | coordinate | function '(' expression ')'
//               | '(' expression ')'
//
// '^' binds tighter than unary minus, so -x^2 parses as -(x^2). An integer
// literal exponent produces an exact integer power node; any other exponent g
// rewrites f^g as exp(g * log(f)).
// ---------------------------------------------------------------------------

namespace detail {

struct Token {
  enum Type { Number, Ident, Op, LParen, RParen, End } type;
  std::string text;
  double number = 0.0;
  std::size_t offset = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) { advance(); }

  const Token& current() const { return tok_; }

  void advance() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    tok_.offset = pos_;
    if (pos_ >= text_.size()) {
      tok_.type = Token::End;
      tok_.text.clear();
      return;
    }
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && pos_ + 1 < text_.size() &&
         std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
      read_number();
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      tok_.type = Token::Ident;
      tok_.text = std::string(text_.substr(start, pos_ - start));
    } else if (c == '(') {
      tok_.type = Token::LParen;
      tok_.text = "(";
      ++pos_;
    } else if (c == ')') {
      tok_.type = Token::RParen;
      tok_.text = ")";
      ++pos_;
    } else if (c == '+' || c == '-' || c == '*' || c == '/' || c == '^') {
      tok_.type = Token::Op;
      tok_.text = std::string(1, c);
      ++pos_;
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }
  }

 private:
  void read_number() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t mark = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      } else {
        pos_ = mark;  // 'e' belongs to a following identifier, not this number
      }
    }
    tok_.type = Token::Number;
    tok_.text = std::string(text_.substr(start, pos_ - start));
    tok_.number = std::strtod(tok_.text.c_str(), nullptr);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Token tok_;
};

class Parser {
 public:
  Parser(std::string_view text, const std::vector<std::string>& coords)
      : lexer_(text), coords_(coords) {}

  Expr parse() {
    Expr e = expression();
    if (lexer_.current().type != Token::End)
      throw ParseError("unexpected '" + lexer_.current().text + "' after expression",
                       lexer_.current().offset);
    return e;
  }

 private:
  static ExprKind function_kind(const std::string& name, bool& found) {
    found = true;
    if (name == "sin") return ExprKind::Sin;
    if (name == "cos") return ExprKind::Cos;
    if (name == "tan") return ExprKind::Tan;
    if (name == "sinh") return ExprKind::Sinh;
    if (name == "cosh") return ExprKind::Cosh;
    if (name == "exp") return ExprKind::Exp;
    if (name == "log") return ExprKind::Log;
    if (name == "sqrt") return ExprKind::Sqrt;
    found = false;
    return ExprKind::Sin;
  }

  Expr expression() {
    Expr lhs = term();
    while (lexer_.current().type == Token::Op &&
           (lexer_.current().text == "+" || lexer_.current().text == "-")) {
      bool plus = lexer_.current().text == "+";
      lexer_.advance();
      Expr rhs = term();
      lhs = plus ? lhs + rhs : lhs - rhs;
    }
    return lhs;
  }

  Expr term() {
    Expr lhs = factor();
    while (lexer_.current().type == Token::Op &&
           (lexer_.current().text == "*" || lexer_.current().text == "/")) {
      bool mul = lexer_.current().text == "*";
      lexer_.advance();
      Expr rhs = factor();
      lhs = mul ? lhs * rhs : lhs / rhs;
    }
    return lhs;
  }

  Expr factor() {
    if (lexer_.current().type == Token::Op && lexer_.current().text == "-") {
      lexer_.advance();
      return -factor();
    }
    if (lexer_.current().type == Token::Op && lexer_.current().text == "+") {
      lexer_.advance();
      return factor();
    }
    return power();
  }

  Expr power() {
    Expr base = atom();
    if (lexer_.current().type == Token::Op && lexer_.current().text == "^") {
      lexer_.advance();
      Expr expo = factor();
      if (expo.is_constant()) {
        double v = expo.node().value;
        if (v == std::floor(v) && std::fabs(v) <= 1e9)
          return int_pow(base, static_cast<int>(v));
      }
      return exp(expo * log(base));
    }
    return base;
  }

  Expr atom() {
    const Token& tok = lexer_.current();
    switch (tok.type) {
      case Token::Number: {
        Expr e = Expr::constant(tok.number);
        lexer_.advance();
        return e;
      }
      case Token::Ident: {
        std::string name = tok.text;
        std::size_t offset = tok.offset;
        lexer_.advance();
        bool is_fn = false;
        ExprKind kind = function_kind(name, is_fn);
        if (is_fn) {
          if (lexer_.current().type != Token::LParen)
            throw ParseError("expected '(' after function '" + name + "'",
                             lexer_.current().offset);
          lexer_.advance();
          Expr arg = expression();
          expect_rparen();
          switch (kind) {
            case ExprKind::Sin: return sin(arg);
            case ExprKind::Cos: return cos(arg);
            case ExprKind::Tan: return tan(arg);
            case ExprKind::Sinh: return sinh(arg);
            case ExprKind::Cosh: return cosh(arg);
            case ExprKind::Exp: return exp(arg);
            case ExprKind::Log: return log(arg);
            case ExprKind::Sqrt: return sqrt(arg);
            default: break;
          }
        }
        for (std::size_t i = 0; i < coords_.size(); ++i)
          if (coords_[i] == name) return Expr::variable(name, static_cast<int>(i));
        throw UnknownIdentifierError(name, offset);
      }
      case Token::LParen: {
        lexer_.advance();
        Expr e = expression();
        expect_rparen();
        return e;
      }
      default:
        throw ParseError("unexpected '" + (tok.type == Token::End ? std::string("end of input")
                                                                  : tok.text) +
                             "', expected number, identifier or '('",
                         tok.offset);
    }
  }

  void expect_rparen() {
    if (lexer_.current().type != Token::RParen)
      throw ParseError("expected ')'", lexer_.current().offset);
    lexer_.advance();
  }

  Lexer lexer_;
  const std::vector<std::string>& coords_;
};

}  // namespace detail

/// Parse `text` against the declared coordinate names.
inline Expr parse_expression(std::string_view text, const std::vector<std::string>& coords) {
  detail::Parser p(text, coords);
  return p.parse();
}

}  // namespace codazzi
