#pragma once

#include <optional>
#include <string_view>
#include <utility>

#include "degen/expr.hpp"
#include "degen/vec2.hpp"

namespace degen {

/// The multiplier f of f(x)·ẋ = JE(x). sign_flip negates the whole field.
class ScalarField {
 public:
  explicit ScalarField(Expr expr, bool sign_flip = false)
      : expr_(std::move(expr)), sign_flip_(sign_flip) {}

  static ScalarField parse(std::string_view src) { return ScalarField(Expr::parse(src)); }

  double operator()(Vec2 p, std::optional<double> s = std::nullopt) const {
    const double v = expr_.eval(p, s);
    return sign_flip_ ? -v : v;
  }

  Vec2 grad(Vec2 p, std::optional<double> s = std::nullopt) const {
    const Vec2 g = expr_.grad(p, s);
    return sign_flip_ ? -g : g;
  }

  ScalarField flipped() const { return ScalarField(expr_, !sign_flip_); }
  ScalarField with_flip(bool flip) const { return ScalarField(expr_, flip); }
  ScalarField bind_parameter(double s) const {
    return ScalarField(expr_.bind_parameter(s), sign_flip_);
  }

  const Expr& expr() const { return expr_; }
  bool sign_flip() const { return sign_flip_; }
  bool uses_parameter() const { return expr_.uses_parameter(); }

 private:
  Expr expr_;
  bool sign_flip_;
};

/// E = (e1, e2); the flow direction is JE = (-e2, e1).
class VectorField {
 public:
  VectorField(Expr e1, Expr e2, bool sign_flip = false)
      : e1_(std::move(e1)), e2_(std::move(e2)), sign_flip_(sign_flip) {}

  static VectorField parse(std::string_view e1, std::string_view e2) {
    return VectorField(Expr::parse(e1), Expr::parse(e2));
  }

  Vec2 operator()(Vec2 p, std::optional<double> s = std::nullopt) const {
    const Vec2 v{e1_.eval(p, s), e2_.eval(p, s)};
    return sign_flip_ ? -v : v;
  }

  Vec2 rotated(Vec2 p, std::optional<double> s = std::nullopt) const {
    return rotate_quarter((*this)(p, s));
  }

  /// Jacobian rows (∂E1/∂x, ∂E2/∂x).
  std::pair<Vec2, Vec2> jacobian(Vec2 p, std::optional<double> s = std::nullopt) const {
    Vec2 g1 = e1_.grad(p, s);
    Vec2 g2 = e2_.grad(p, s);
    if (sign_flip_) {
      g1 = -g1;
      g2 = -g2;
    }
    return {g1, g2};
  }

  VectorField flipped() const { return VectorField(e1_, e2_, !sign_flip_); }
  VectorField with_flip(bool flip) const { return VectorField(e1_, e2_, flip); }
  VectorField bind_parameter(double s) const {
    return VectorField(e1_.bind_parameter(s), e2_.bind_parameter(s), sign_flip_);
  }

  const Expr& e1() const { return e1_; }
  const Expr& e2() const { return e2_; }
  bool sign_flip() const { return sign_flip_; }
  bool uses_parameter() const { return e1_.uses_parameter() || e2_.uses_parameter(); }

 private:
  Expr e1_;
  Expr e2_;
  bool sign_flip_;
};

/// ⟨JE, ∇f⟩ at p.
inline double tangency_function(const ScalarField& f, const VectorField& e, Vec2 p,
                                std::optional<double> s = std::nullopt) {
  return dot(e.rotated(p, s), f.grad(p, s));
}

}  // namespace degen
