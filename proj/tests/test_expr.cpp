#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "degen/expr.hpp"
#include "degen/field.hpp"
#include "support/random_expr.hpp"

using namespace degen;

TEST(Parse, PolynomialHonoursPrecedence) {
  const Expr e = parse("x1^2 + x2^2 - 1");
  const Node& root = e.root();
  ASSERT_EQ(root.kind, NodeKind::Sub);
  EXPECT_EQ(root.lhs->kind, NodeKind::Add);
  EXPECT_EQ(root.lhs->lhs->kind, NodeKind::Pow);
  EXPECT_EQ(root.rhs->kind, NodeKind::Number);
  EXPECT_DOUBLE_EQ(e.eval({0.5, 2.0}), 0.25 + 4.0 - 1.0);
}

TEST(Parse, UnaryMinus) {
  const Expr e = parse("-x2");
  ASSERT_EQ(e.root().kind, NodeKind::Negate);
  EXPECT_EQ(e.root().lhs->kind, NodeKind::Variable);
  EXPECT_EQ(e.root().lhs->var, Var::X2);
}

TEST(Parse, PowerBindsTighterThanUnaryMinusAndIsRightAssociative) {
  EXPECT_DOUBLE_EQ(parse("-2^2").eval({0, 0}), -4.0);
  EXPECT_DOUBLE_EQ(parse("2^3^2").eval({0, 0}), 512.0);
  EXPECT_DOUBLE_EQ(parse("2^-1").eval({0, 0}), 0.5);
  EXPECT_DOUBLE_EQ(parse("8/4/2").eval({0, 0}), 1.0);
  EXPECT_DOUBLE_EQ(parse("8-4-2").eval({0, 0}), 2.0);
  EXPECT_DOUBLE_EQ(parse("2*x1^2").eval({3, 0}), 18.0);
}

TEST(Parse, UnclosedParenthesisReportsOffset) {
  try {
    parse("sin(x1");
    FAIL() << "expected SyntaxError";
  } catch (const SyntaxError& err) {
    EXPECT_EQ(err.offset(), 7u);
    EXPECT_EQ(err.code(), ErrorCode::SyntaxError);
    EXPECT_NE(std::find(err.expected().begin(), err.expected().end(), "')'"), err.expected().end());
  }
}

TEST(Parse, Errors) {
  EXPECT_THROW(parse(""), SyntaxError);
  EXPECT_THROW(parse("x1 +"), SyntaxError);
  EXPECT_THROW(parse("x1 x2"), SyntaxError);
  EXPECT_THROW(parse("sin x1"), SyntaxError);
  EXPECT_THROW(parse("x1 # 2"), SyntaxError);
  try {
    parse("x1 + y");
    FAIL();
  } catch (const UnknownIdentifier& err) {
    EXPECT_EQ(err.identifier(), "y");
    EXPECT_EQ(err.offset(), 6u);
  }
}

TEST(Parse, NumbersAndConstants) {
  EXPECT_DOUBLE_EQ(parse("1.5e2").eval({0, 0}), 150.0);
  EXPECT_DOUBLE_EQ(parse(".25").eval({0, 0}), 0.25);
  EXPECT_DOUBLE_EQ(parse("2*e").eval({0, 0}), 2 * std::numbers::e);
  EXPECT_DOUBLE_EQ(parse("cos(pi)").eval({0, 0}), -1.0);
  // "2e" is the number 2 followed by the identifier e: not valid
  EXPECT_THROW(parse("2e"), SyntaxError);
}

TEST(Eval, UnitCircle) {
  const Expr f = parse("x1^2 + x2^2 - 1");
  EXPECT_EQ(eval(f, {1, 0}), 0.0);
  EXPECT_EQ(eval(f, {0, 0}), -1.0);
}

TEST(Eval, DomainErrors) {
  auto code_of = [](const char* src, Vec2 p) {
    try {
      eval(parse(src), p);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::ConfigError;
  };
  EXPECT_EQ(code_of("log(x1)", {-1, 0}), ErrorCode::DomainError);
  EXPECT_EQ(code_of("sqrt(x1)", {-1, 0}), ErrorCode::DomainError);
  EXPECT_EQ(code_of("1/x1", {0, 0}), ErrorCode::DomainError);
  EXPECT_EQ(code_of("x1^0.5", {-1, 0}), ErrorCode::DomainError);
  EXPECT_EQ(code_of("x1^-1", {0, 0}), ErrorCode::DomainError);
  EXPECT_DOUBLE_EQ(eval(parse("x1^3"), {-2, 0}), -8.0);
  EXPECT_DOUBLE_EQ(eval(parse("x1^2.5"), {4, 0}), 32.0);
}

TEST(Eval, Parameter) {
  const Expr f = parse("x1^2 + x2^2 - s");
  EXPECT_TRUE(f.uses_parameter());
  EXPECT_DOUBLE_EQ(eval(f, {1, 1}, 0.5), 1.5);
  try {
    eval(f, {1, 1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnboundParameter);
  }
  const Expr bound = f.bind_parameter(-0.5);
  EXPECT_FALSE(bound.uses_parameter());
  EXPECT_DOUBLE_EQ(eval(bound, {1, 1}), 2.5);
}

TEST(Grad, Polynomials) {
  const Vec2 g = grad(parse("x1^2 + x2^2 - 1"), {1, 0});
  EXPECT_EQ(g.x, 2.0);
  EXPECT_EQ(g.y, 0.0);
  const Vec2 h = grad(parse("x1*x2"), {0.3, -1.7});
  EXPECT_DOUBLE_EQ(h.x, -1.7);
  EXPECT_DOUBLE_EQ(h.y, 0.3);
}

TEST(Grad, TranscendentalClosedForms) {
  const Vec2 p{0.7, -0.4};
  const Vec2 g = grad(parse("sin(x1)*exp(x2) + log(x1) - sqrt(x1*x1+1) + tanh(x2) + abs(x2)"), p);
  EXPECT_NEAR(g.x, std::cos(0.7) * std::exp(-0.4) + 1 / 0.7 - 0.7 / std::sqrt(1.49), 1e-14);
  const double th = std::tanh(-0.4);
  EXPECT_NEAR(g.y, std::sin(0.7) * std::exp(-0.4) + 1 - th * th - 1, 1e-14);
  const Vec2 q = grad(parse("x1^x2"), {2.0, 3.0});
  EXPECT_NEAR(q.x, 3 * 4.0, 1e-12);
  EXPECT_NEAR(q.y, 8.0 * std::log(2.0), 1e-12);
}

TEST(Grad, AgreesWithCentralDifferences) {
  test_support::RandomExprGenerator gen(20240611);
  int checked = 0, failures = 0;
  while (checked < 300) {
    const Expr e = gen.next();
    const Vec2 p = gen.point();
    Vec2 ad, fd;
    try {
      ad = grad(e, p);
      fd = test_support::central_difference_gradient(e, p);
    } catch (const Error&) {
      continue;
    }
    ++checked;
    const double rel = norm(ad - fd) / std::max(1.0, norm(ad));
    if (!(rel < 1e-6)) ++failures;
  }
  EXPECT_LE(failures, 3) << "of " << checked;
}

TEST(Print, ParsePrintParseIsIdempotent) {
  test_support::RandomExprGenerator gen(7);
  for (int k = 0; k < 200; ++k) {
    const Expr e = gen.next(5);
    const std::string text = e.str();
    const Expr again = parse(text);
    EXPECT_TRUE(structurally_equal(e, again)) << text;
    EXPECT_EQ(again.str(), text);
  }
  for (const char* src : {"-x1^2", "(-x1)^2", "x1-(x2-1)", "x1/(x2*3)", "-(x1+x2)", "2^3^2",
                          "(2^3)^2", "--x1", "x1^-x2", "sin(x1)^2", "1e-07*x1"}) {
    const Expr e = parse(src);
    EXPECT_TRUE(structurally_equal(e, parse(e.str()))) << src << " -> " << e.str();
  }
}

TEST(Field, SignFlipNegates) {
  const ScalarField f = ScalarField::parse("x1^2 + x2^2 - 1");
  const ScalarField g = f.flipped();
  for (Vec2 p : {Vec2{0.2, 0.3}, Vec2{-1.5, 2}, Vec2{1, 0}}) {
    EXPECT_EQ(g(p), -f(p));
    EXPECT_EQ(g.grad(p), -f.grad(p));
  }
}

TEST(Field, RotatedInnerProductIdentity) {
  // ⟨JE, ∇f⟩ = ⟨E, −J∇f⟩
  test_support::RandomExprGenerator gen(99);
  int checked = 0;
  while (checked < 100) {
    const ScalarField f(gen.next(3));
    const VectorField e(gen.next(3), gen.next(3));
    const Vec2 p = gen.point();
    try {
      const double lhs = tangency_function(f, e, p);
      const double rhs = dot(e(p), -rotate_quarter(f.grad(p)));
      EXPECT_NEAR(lhs, rhs, 1e-12 * std::max(1.0, std::abs(lhs)));
      ++checked;
    } catch (const Error&) {
    }
  }
}

TEST(Field, JEIsQuarterTurn) {
  const VectorField e = VectorField::parse("-x2", "x1");
  const Vec2 je = e.rotated({0.6, 0.8});
  EXPECT_DOUBLE_EQ(je.x, -0.6);
  EXPECT_DOUBLE_EQ(je.y, -0.8);
}
