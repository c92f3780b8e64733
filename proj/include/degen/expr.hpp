#pragma once

// Expression trees over x1, x2 and an optional homotopy parameter s, with a
// recursive-descent parser, a round-trippable printer, and evaluation over
// doubles or forward-mode duals.

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "degen/dual.hpp"
#include "degen/error.hpp"
#include "degen/vec2.hpp"

namespace degen {

enum class NodeKind { Number, Constant, Variable, Negate, Add, Sub, Mul, Div, Pow, Call };
enum class Var { X1, X2, S };
enum class Func { Sin, Cos, Tan, Exp, Log, Sqrt, Tanh, Abs };
enum class NamedConstant { Pi, E };

struct Node {
  NodeKind kind = NodeKind::Number;
  double number = 0.0;
  Var var = Var::X1;
  Func func = Func::Sin;
  NamedConstant constant = NamedConstant::Pi;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
  bool variable_free = true;  // no x1, x2 or s below this node
  bool uses_parameter = false;
};

using NodePtr = std::shared_ptr<const Node>;

constexpr std::string_view function_name(Func f) {
  switch (f) {
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
    case Func::Tan: return "tan";
    case Func::Exp: return "exp";
    case Func::Log: return "log";
    case Func::Sqrt: return "sqrt";
    case Func::Tanh: return "tanh";
    case Func::Abs: return "abs";
  }
  return "?";
}

inline std::optional<Func> function_by_name(std::string_view name) {
  for (Func f : {Func::Sin, Func::Cos, Func::Tan, Func::Exp, Func::Log, Func::Sqrt,
                 Func::Tanh, Func::Abs}) {
    if (function_name(f) == name) return f;
  }
  return std::nullopt;
}

namespace detail {

inline std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

template <class T>
T lift(double v) {
  if constexpr (std::is_same_v<T, double>) {
    return v;
  } else {
    return T::constant(v);
  }
}

[[noreturn]] inline void domain_error(const std::string& what) {
  throw Error(ErrorCode::DomainError, what);
}

template <class T>
T integer_power(T base, long long n) {
  if (n < 0) {
    if (value_of(base) == 0.0) domain_error("zero raised to a negative power");
    return lift<T>(1.0) / integer_power(base, -n);
  }
  T result = lift<T>(1.0);
  bool first = true;
  while (n > 0) {
    if (n & 1) {
      result = first ? base : result * base;
      first = false;
    }
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

template <class T>
struct Bindings {
  const T& x1;
  const T& x2;
  const T* s;
};

template <class T>
T eval_node(const Node& n, const Bindings<T>& b) {
  using std::abs, std::cos, std::exp, std::log, std::sin, std::sqrt, std::tan, std::tanh;
  switch (n.kind) {
    case NodeKind::Number: return lift<T>(n.number);
    case NodeKind::Constant:
      return lift<T>(n.constant == NamedConstant::Pi ? std::numbers::pi : std::numbers::e);
    case NodeKind::Variable:
      switch (n.var) {
        case Var::X1: return b.x1;
        case Var::X2: return b.x2;
        case Var::S:
          if (b.s == nullptr)
            throw Error(ErrorCode::UnboundParameter, "expression uses s but no value was supplied");
          return *b.s;
      }
      break;
    case NodeKind::Negate: return -eval_node(*n.lhs, b);
    case NodeKind::Add: return eval_node(*n.lhs, b) + eval_node(*n.rhs, b);
    case NodeKind::Sub: return eval_node(*n.lhs, b) - eval_node(*n.rhs, b);
    case NodeKind::Mul: return eval_node(*n.lhs, b) * eval_node(*n.rhs, b);
    case NodeKind::Div: {
      T den = eval_node(*n.rhs, b);
      if (value_of(den) == 0.0) domain_error("division by zero");
      return eval_node(*n.lhs, b) / den;
    }
    case NodeKind::Pow: {
      T base = eval_node(*n.lhs, b);
      T expo = eval_node(*n.rhs, b);
      const double ev = value_of(expo);
      if (n.rhs->variable_free && ev == std::nearbyint(ev) && std::abs(ev) <= 1024.0)
        return integer_power(base, static_cast<long long>(ev));
      if (!(value_of(base) > 0.0)) domain_error("non-integer power of a non-positive base");
      return exp(expo * log(base));
    }
    case NodeKind::Call: {
      T a = eval_node(*n.lhs, b);
      switch (n.func) {
        case Func::Sin: return sin(a);
        case Func::Cos: return cos(a);
        case Func::Tan: return tan(a);
        case Func::Exp: return exp(a);
        case Func::Log:
          if (!(value_of(a) > 0.0)) domain_error("log of a non-positive value");
          return log(a);
        case Func::Sqrt:
          if (value_of(a) < 0.0) domain_error("sqrt of a negative value");
          return sqrt(a);
        case Func::Tanh: return tanh(a);
        case Func::Abs: return abs(a);
      }
      break;
    }
  }
  domain_error("malformed expression node");
}

}  // namespace detail

/// Immutable expression tree. Copies share structure.
class Expr {
 public:
  static Expr parse(std::string_view source);

  static Expr number(double v) {
    if (v < 0.0 || (v == 0.0 && std::signbit(v))) return negate(number(-v));
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Number;
    n->number = v;
    return Expr(std::move(n));
  }

  static Expr constant(NamedConstant c) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Constant;
    n->constant = c;
    return Expr(std::move(n));
  }

  static Expr variable(Var v) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Variable;
    n->var = v;
    n->variable_free = false;
    n->uses_parameter = v == Var::S;
    return Expr(std::move(n));
  }

  static Expr negate(const Expr& a) { return unary(NodeKind::Negate, Func::Sin, a); }
  static Expr call(Func f, const Expr& a) { return unary(NodeKind::Call, f, a); }

  static Expr binary(NodeKind kind, const Expr& a, const Expr& b) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->lhs = a.root_;
    n->rhs = b.root_;
    n->variable_free = a.root_->variable_free && b.root_->variable_free;
    n->uses_parameter = a.root_->uses_parameter || b.root_->uses_parameter;
    return Expr(std::move(n));
  }

  template <class T>
  T evaluate(const T& x1, const T& x2, const T* s = nullptr) const {
    return detail::eval_node(*root_, detail::Bindings<T>{x1, x2, s});
  }

  double eval(Vec2 p, std::optional<double> s = std::nullopt) const {
    const double* sp = s ? &*s : nullptr;
    const double v = evaluate<double>(p.x, p.y, sp);
    if (!std::isfinite(v)) detail::domain_error("non-finite result");
    return v;
  }

  /// Exact first derivatives by one forward-mode pass with two seeds.
  Vec2 grad(Vec2 p, std::optional<double> s = std::nullopt) const {
    using D = Dual<2>;
    const D x1 = D::variable(p.x, 0);
    const D x2 = D::variable(p.y, 1);
    const D sd = D::constant(s.value_or(0.0));
    const D r = evaluate<D>(x1, x2, s ? &sd : nullptr);
    if (!std::isfinite(r.grad[0]) || !std::isfinite(r.grad[1]))
      detail::domain_error("not differentiable at this point");
    return {r.grad[0], r.grad[1]};
  }

  bool uses_parameter() const { return root_->uses_parameter; }
  bool variable_free() const { return root_->variable_free; }
  const Node& root() const { return *root_; }
  const NodePtr& root_ptr() const { return root_; }

  /// Replaces s by a numeric literal.
  Expr bind_parameter(double s) const {
    return Expr(substitute(root_, s));
  }

  std::string str() const {
    std::string out;
    print(*root_, out);
    return out;
  }

  friend bool structurally_equal(const Expr& a, const Expr& b) {
    return equal_nodes(*a.root_, *b.root_);
  }

  explicit Expr(NodePtr root) : root_(std::move(root)) {}

 private:
  static Expr unary(NodeKind kind, Func f, const Expr& a) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->func = f;
    n->lhs = a.root_;
    n->variable_free = a.root_->variable_free;
    n->uses_parameter = a.root_->uses_parameter;
    return Expr(std::move(n));
  }

  static NodePtr substitute(const NodePtr& n, double s) {
    if (!n->uses_parameter) return n;
    if (n->kind == NodeKind::Variable) return number(s).root_;
    auto copy = std::make_shared<Node>(*n);
    if (copy->lhs) copy->lhs = substitute(copy->lhs, s);
    if (copy->rhs) copy->rhs = substitute(copy->rhs, s);
    copy->uses_parameter = false;
    copy->variable_free = (!copy->lhs || copy->lhs->variable_free) &&
                          (!copy->rhs || copy->rhs->variable_free);
    return copy;
  }

  static bool equal_nodes(const Node& a, const Node& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
      case NodeKind::Number: return a.number == b.number;
      case NodeKind::Constant: return a.constant == b.constant;
      case NodeKind::Variable: return a.var == b.var;
      case NodeKind::Negate: return equal_nodes(*a.lhs, *b.lhs);
      case NodeKind::Call: return a.func == b.func && equal_nodes(*a.lhs, *b.lhs);
      default: return equal_nodes(*a.lhs, *b.lhs) && equal_nodes(*a.rhs, *b.rhs);
    }
  }

  static int precedence(const Node& n) {
    switch (n.kind) {
      case NodeKind::Add:
      case NodeKind::Sub: return 1;
      case NodeKind::Mul:
      case NodeKind::Div: return 2;
      case NodeKind::Negate: return 3;
      case NodeKind::Pow: return 4;
      default: return 5;
    }
  }

  static void print_wrapped(const Node& n, bool parens, std::string& out) {
    if (parens) out += '(';
    print(n, out);
    if (parens) out += ')';
  }

  static void print(const Node& n, std::string& out) {
    const int p = precedence(n);
    switch (n.kind) {
      case NodeKind::Number: out += detail::format_number(n.number); return;
      case NodeKind::Constant: out += n.constant == NamedConstant::Pi ? "pi" : "e"; return;
      case NodeKind::Variable:
        out += n.var == Var::X1 ? "x1" : (n.var == Var::X2 ? "x2" : "s");
        return;
      case NodeKind::Negate:
        out += '-';
        print_wrapped(*n.lhs, precedence(*n.lhs) < 3, out);
        return;
      case NodeKind::Call:
        out += function_name(n.func);
        out += '(';
        print(*n.lhs, out);
        out += ')';
        return;
      case NodeKind::Pow:
        print_wrapped(*n.lhs, precedence(*n.lhs) < 5, out);
        out += '^';
        print_wrapped(*n.rhs, precedence(*n.rhs) < 3, out);
        return;
      default: {
        const char op = n.kind == NodeKind::Add   ? '+'
                        : n.kind == NodeKind::Sub ? '-'
                        : n.kind == NodeKind::Mul ? '*'
                                                  : '/';
        print_wrapped(*n.lhs, precedence(*n.lhs) < p, out);
        out += p == 1 ? std::string(" ") + op + " " : std::string(1, op);
        print_wrapped(*n.rhs, precedence(*n.rhs) <= p, out);
        return;
      }
    }
  }

  NodePtr root_;
};

namespace detail {

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) { advance(); }

  Expr parse_all() {
    Expr e = parse_sum();
    if (tok_.kind != Tok::End)
      fail({"'+'", "'-'", "'*'", "'/'", "'^'", "end of input"}, "unexpected token");
    return e;
  }

 private:
  enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

  struct Token {
    Tok kind = Tok::End;
    std::size_t pos = 0;  // 0-based
    std::string text;
    double number = 0.0;
  };

  [[noreturn]] void fail(std::vector<std::string> expected, const std::string& msg) const {
    throw SyntaxError(tok_.pos + 1, std::move(expected), msg);
  }

  void advance() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    tok_ = Token{};
    tok_.pos = pos_;
    if (pos_ >= src_.size()) {
      tok_.kind = Tok::End;
      return;
    }
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      lex_number();
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t end = pos_;
      while (end < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[end])) || src_[end] == '_'))
        ++end;
      tok_.kind = Tok::Ident;
      tok_.text = std::string(src_.substr(pos_, end - pos_));
      pos_ = end;
      return;
    }
    switch (c) {
      case '+': tok_.kind = Tok::Plus; break;
      case '-': tok_.kind = Tok::Minus; break;
      case '*': tok_.kind = Tok::Star; break;
      case '/': tok_.kind = Tok::Slash; break;
      case '^': tok_.kind = Tok::Caret; break;
      case '(': tok_.kind = Tok::LParen; break;
      case ')': tok_.kind = Tok::RParen; break;
      default:
        throw SyntaxError(pos_ + 1, {"number", "identifier", "operator", "'('", "')'"},
                          std::string("unexpected character '") + c + "'");
    }
    ++pos_;
  }

  void lex_number() {
    std::size_t end = pos_;
    auto digits = [&] {
      std::size_t start = end;
      while (end < src_.size() && std::isdigit(static_cast<unsigned char>(src_[end]))) ++end;
      return end - start;
    };
    std::size_t n = digits();
    if (end < src_.size() && src_[end] == '.') {
      ++end;
      n += digits();
    }
    if (n == 0) throw SyntaxError(pos_ + 1, {"number"}, "malformed number");
    if (end < src_.size() && (src_[end] == 'e' || src_[end] == 'E')) {
      std::size_t probe = end + 1;
      if (probe < src_.size() && (src_[probe] == '+' || src_[probe] == '-')) ++probe;
      if (probe < src_.size() && std::isdigit(static_cast<unsigned char>(src_[probe]))) {
        end = probe;
        digits();
      }
    }
    double v = 0.0;
    auto res = std::from_chars(src_.data() + pos_, src_.data() + end, v);
    if (res.ec != std::errc() || !std::isfinite(v))
      throw SyntaxError(pos_ + 1, {"number"}, "number out of range");
    tok_.kind = Tok::Number;
    tok_.number = v;
    pos_ = end;
  }

  Expr parse_sum() {
    Expr lhs = parse_product();
    while (tok_.kind == Tok::Plus || tok_.kind == Tok::Minus) {
      const NodeKind k = tok_.kind == Tok::Plus ? NodeKind::Add : NodeKind::Sub;
      advance();
      lhs = Expr::binary(k, lhs, parse_product());
    }
    return lhs;
  }

  Expr parse_product() {
    Expr lhs = parse_unary();
    while (tok_.kind == Tok::Star || tok_.kind == Tok::Slash) {
      const NodeKind k = tok_.kind == Tok::Star ? NodeKind::Mul : NodeKind::Div;
      advance();
      lhs = Expr::binary(k, lhs, parse_unary());
    }
    return lhs;
  }

  Expr parse_unary() {
    if (tok_.kind == Tok::Minus) {
      advance();
      return Expr::negate(parse_unary());
    }
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    if (tok_.kind == Tok::Caret) {
      advance();
      return Expr::binary(NodeKind::Pow, base, parse_unary());
    }
    return base;
  }

  Expr parse_primary() {
    switch (tok_.kind) {
      case Tok::Number: {
        const double v = tok_.number;
        advance();
        auto n = std::make_shared<Node>();
        n->kind = NodeKind::Number;
        n->number = v;
        return Expr(std::move(n));
      }
      case Tok::LParen: {
        advance();
        Expr inner = parse_sum();
        expect_rparen();
        return inner;
      }
      case Tok::Ident: return parse_identifier();
      default:
        fail({"number", "identifier", "'('", "'-'"}, "expected an operand");
    }
  }

  Expr parse_identifier() {
    const std::string name = tok_.text;
    const std::size_t at = tok_.pos + 1;
    if (name == "x1") return advance(), Expr::variable(Var::X1);
    if (name == "x2") return advance(), Expr::variable(Var::X2);
    if (name == "s") return advance(), Expr::variable(Var::S);
    if (name == "pi") return advance(), Expr::constant(NamedConstant::Pi);
    if (name == "e") return advance(), Expr::constant(NamedConstant::E);
    if (auto f = function_by_name(name)) {
      advance();
      if (tok_.kind != Tok::LParen) fail({"'('"}, "function name must be followed by '('");
      advance();
      Expr arg = parse_sum();
      expect_rparen();
      return Expr::call(*f, arg);
    }
    throw UnknownIdentifier(at, name);
  }

  void expect_rparen() {
    if (tok_.kind != Tok::RParen)
      fail({"')'", "'+'", "'-'", "'*'", "'/'", "'^'"}, "unclosed parenthesis");
    advance();
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  Token tok_;
};

}  // namespace detail

inline Expr Expr::parse(std::string_view source) {
  if (source.find_first_not_of(" \t\r\n") == std::string_view::npos)
    throw SyntaxError(1, {"number", "identifier", "'('", "'-'"}, "empty expression");
  return detail::Parser(source).parse_all();
}

inline Expr parse(std::string_view source) { return Expr::parse(source); }

inline double eval(const Expr& e, Vec2 p, std::optional<double> s = std::nullopt) {
  return e.eval(p, s);
}

inline Vec2 grad(const Expr& e, Vec2 p, std::optional<double> s = std::nullopt) {
  return e.grad(p, s);
}

}  // namespace degen
