#pragma once

// Sparse bivariate polynomials over the reals, convertible to and from Expr.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include "degen/error.hpp"
#include "degen/expr.hpp"

namespace degen {

class Poly2 {
 public:
  using Monomial = std::pair<int, int>;  // (power of x1, power of x2)

  Poly2() = default;
  static Poly2 constant(double c) {
    Poly2 p;
    p.add_term(0, 0, c);
    return p;
  }
  static Poly2 monomial(int i, int j, double c = 1.0) {
    Poly2 p;
    p.add_term(i, j, c);
    return p;
  }

  void add_term(int i, int j, double c) {
    if (c == 0.0) return;
    auto [it, inserted] = terms_.try_emplace({i, j}, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0.0) terms_.erase(it);
    }
  }

  const std::map<Monomial, double>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  int degree() const {
    int d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.first + m.second);
    return d;
  }

  double max_abs_coefficient() const {
    double m = 0.0;
    for (const auto& [k, c] : terms_) m = std::max(m, std::abs(c));
    return m;
  }

  double coefficient(int i, int j) const {
    const auto it = terms_.find({i, j});
    return it == terms_.end() ? 0.0 : it->second;
  }

  double operator()(double x, double y) const {
    double v = 0.0;
    for (const auto& [m, c] : terms_) v += c * std::pow(x, m.first) * std::pow(y, m.second);
    return v;
  }

  friend Poly2 operator+(Poly2 a, const Poly2& b) {
    for (const auto& [m, c] : b.terms_) a.add_term(m.first, m.second, c);
    return a;
  }
  friend Poly2 operator-(Poly2 a, const Poly2& b) {
    for (const auto& [m, c] : b.terms_) a.add_term(m.first, m.second, -c);
    return a;
  }
  friend Poly2 operator-(const Poly2& a) { return Poly2{} - a; }
  friend Poly2 operator*(const Poly2& a, const Poly2& b) {
    Poly2 r;
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) r.add_term(ma.first + mb.first, ma.second + mb.second, ca * cb);
    return r;
  }
  friend Poly2 operator*(double s, const Poly2& a) { return Poly2::constant(s) * a; }

  Poly2 pow(int n) const {
    Poly2 r = constant(1.0), b = *this;
    while (n > 0) {
      if (n & 1) r = r * b;
      b = b * b;
      n >>= 1;
    }
    return r;
  }

  /// Drops coefficients below rel·max|c|.
  Poly2 pruned(double rel) const {
    const double cut = rel * max_abs_coefficient();
    Poly2 r;
    for (const auto& [m, c] : terms_)
      if (std::abs(c) > cut) r.terms_.emplace(m, c);
    return r;
  }

  /// Exact division by x1² + x2², if the remainder vanishes (relative to
  /// rel·max|c|).
  std::optional<Poly2> divide_by_radius_squared(double rel = 1e-12) const {
    if (is_zero()) return std::nullopt;
    const double cut = rel * max_abs_coefficient();
    Poly2 rem = *this, quot;
    // eliminate x1 powers >= 2 from the top down
    while (true) {
      auto it = std::find_if(rem.terms_.rbegin(), rem.terms_.rend(),
                             [](const auto& t) { return t.first.first >= 2; });
      if (it == rem.terms_.rend()) break;
      const auto [i, j] = it->first;
      const double c = it->second;
      quot.add_term(i - 2, j, c);
      rem.terms_.erase(std::next(it).base());
      rem.add_term(i - 2, j + 2, -c);
    }
    for (const auto& [m, c] : rem.terms_)
      if (std::abs(c) > cut) return std::nullopt;
    return quot;
  }

  /// Divides out x1² + x2² as often as possible.
  Poly2 strip_radius_factors() const {
    Poly2 p = *this;
    while (auto q = p.divide_by_radius_squared()) p = std::move(*q);
    return p;
  }

  Expr to_expr() const {
    if (terms_.empty()) return Expr::number(0.0);
    std::optional<Expr> sum;
    for (const auto& [m, c] : terms_) {
      std::optional<Expr> mono;
      auto times = [&](Expr factor) {
        mono = mono ? Expr::binary(NodeKind::Mul, *mono, factor) : factor;
      };
      auto power = [](Var v, int n) {
        const Expr x = Expr::variable(v);
        return n == 1 ? x : Expr::binary(NodeKind::Pow, x, Expr::number(n));
      };
      const double mag = std::abs(c);
      if (mag != 1.0 || (m.first == 0 && m.second == 0)) times(Expr::number(mag));
      if (m.first > 0) times(power(Var::X1, m.first));
      if (m.second > 0) times(power(Var::X2, m.second));
      if (!sum) {
        sum = c < 0 ? Expr::negate(*mono) : *mono;
      } else {
        sum = Expr::binary(c < 0 ? NodeKind::Sub : NodeKind::Add, *sum, *mono);
      }
    }
    return *sum;
  }

  friend bool operator==(const Poly2&, const Poly2&) = default;

 private:
  std::map<Monomial, double> terms_;
};

namespace detail {

[[noreturn]] inline void not_polynomial(const std::string& why) {
  throw Error(ErrorCode::NotCompactifiable, "not a polynomial: " + why);
}

inline Poly2 to_poly(const Node& n) {
  if (n.variable_free && n.kind != NodeKind::Variable) {
    return Poly2::constant(eval_node(n, Bindings<double>{0.0, 0.0, nullptr}));
  }
  switch (n.kind) {
    case NodeKind::Variable:
      if (n.var == Var::S) not_polynomial("unbound parameter s");
      return n.var == Var::X1 ? Poly2::monomial(1, 0) : Poly2::monomial(0, 1);
    case NodeKind::Negate: return -to_poly(*n.lhs);
    case NodeKind::Add: return to_poly(*n.lhs) + to_poly(*n.rhs);
    case NodeKind::Sub: return to_poly(*n.lhs) - to_poly(*n.rhs);
    case NodeKind::Mul: return to_poly(*n.lhs) * to_poly(*n.rhs);
    case NodeKind::Div: {
      if (!n.rhs->variable_free) not_polynomial("division by a non-constant");
      const double d = eval_node(*n.rhs, Bindings<double>{0.0, 0.0, nullptr});
      if (d == 0.0) not_polynomial("division by zero");
      return (1.0 / d) * to_poly(*n.lhs);
    }
    case NodeKind::Pow: {
      if (!n.rhs->variable_free) not_polynomial("non-constant exponent");
      const double e = eval_node(*n.rhs, Bindings<double>{0.0, 0.0, nullptr});
      if (e < 0 || e != std::floor(e) || e > 64) not_polynomial("exponent must be an integer in [0, 64]");
      return to_poly(*n.lhs).pow(static_cast<int>(e));
    }
    case NodeKind::Call: not_polynomial(std::string(function_name(n.func)) + " of a variable");
    case NodeKind::Number:
    case NodeKind::Constant: break;
  }
  not_polynomial("unsupported node");
}

}  // namespace detail

inline Poly2 to_polynomial(const Expr& e) { return detail::to_poly(e.root()); }

}  // namespace degen
