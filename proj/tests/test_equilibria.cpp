#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "degen/equilibria.hpp"

using namespace degen;

namespace {

const Domain kDomain{-2, 2, -2, 2, 64};

// Oracle: raw angle accumulation of E around a circle at fixed resolution.
int angle_oracle(const VectorField& e, Vec2 z, double r, int samples = 4096) {
  double total = 0.0;
  Vec2 prev = e(z + Vec2{r, 0});
  for (int i = 1; i <= samples; ++i) {
    const double t = 2 * std::numbers::pi * i / samples;
    const Vec2 cur = e(z + r * Vec2{std::cos(t), std::sin(t)});
    total += std::atan2(cross(prev, cur), dot(prev, cur));
    prev = cur;
  }
  return static_cast<int>(std::lround(total / (2 * std::numbers::pi)));
}

// Oracle: eigenvalue real parts of the finite-difference Jacobian of JE/f.
ZeroKind fd_kind(const ScalarField& f, const VectorField& e, Vec2 z) {
  const double h = 1e-6;
  auto v = [&](Vec2 p) { return (1.0 / f(p)) * e.rotated(p); };
  const Vec2 dx = (1 / (2 * h)) * (v(z + Vec2{h, 0}) - v(z - Vec2{h, 0}));
  const Vec2 dy = (1 / (2 * h)) * (v(z + Vec2{0, h}) - v(z - Vec2{0, h}));
  const double tr = dx.x + dy.y, det = dx.x * dy.y - dy.x * dx.y;
  if (det < 0) return ZeroKind::Other;
  return tr > 0 ? ZeroKind::Source : ZeroKind::Sink;
}

}  // namespace

TEST(Equilibria, FindZeros) {
  auto z = find_zeros(VectorField::parse("-x2", "x1"), kDomain);
  ASSERT_EQ(z.size(), 1u);
  EXPECT_NEAR(norm(z[0]), 0.0, 1e-12);

  z = find_zeros(VectorField::parse("x2 + 0.1", "-x1"), kDomain);
  ASSERT_EQ(z.size(), 1u);
  EXPECT_NEAR(z[0].x, 0.0, 1e-12);
  EXPECT_NEAR(z[0].y, -0.1, 1e-12);

  EXPECT_TRUE(find_zeros(VectorField::parse("1", "0"), kDomain).empty());
}

TEST(Equilibria, FindsSeveralZerosSorted) {
  // zeros at (-1, 0) and (1, 0)
  const auto z = find_zeros(VectorField::parse("x1^2 - 1", "x2*(x1 + 3)"), kDomain);
  ASSERT_EQ(z.size(), 2u);
  EXPECT_NEAR(z[0].x, -1.0, 1e-12);
  EXPECT_NEAR(z[1].x, 1.0, 1e-12);
}

TEST(Equilibria, ZeroOnRingIsDropped) {
  const auto f = ScalarField::parse("x1^2 + x2^2 - 1");
  const LevelSet ls = extract_level_set(f, {-2, 2, -2, 2, 256});
  std::vector<Diagnostic> diag;
  const auto z = find_zeros(VectorField::parse("x1 - 1", "x2"), kDomain, ls.rings, &diag);
  EXPECT_TRUE(z.empty());
  ASSERT_EQ(diag.size(), 1u);
  EXPECT_EQ(diag[0].code, ErrorCode::ZeroOnRing);
}

TEST(Equilibria, PoincareIndexMatchesOracle) {
  const std::pair<const char*, const char*> fields[] = {
      {"-x2", "x1"}, {"x1", "-x2"}, {"x1^2 - x2^2", "2*x1*x2"}, {"x1^3 - 3*x1*x2^2", "-(3*x1^2*x2 - x2^3)"}};
  const int expected[] = {1, -1, 2, -3};
  for (int k = 0; k < 4; ++k) {
    const auto e = VectorField::parse(fields[k].first, fields[k].second);
    EXPECT_EQ(angle_oracle(e, {0, 0}, 0.3), expected[k]);
    EXPECT_EQ(poincare_index(e, {0, 0}, 0.3), expected[k]);
  }
}

TEST(Equilibria, PoincareIndexErrors) {
  const auto e = VectorField::parse("x1^2 + x2^2 - 0.25", "x1");
  try {
    poincare_index(e, {0, 0}, 0.5);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::ZeroOnCircle);
  }
  // two zeros (±0.3, 0) of index +1 and -1: radius 0.5 encloses both
  const auto two = VectorField::parse("x1^2 - 0.09", "x2");
  try {
    poincare_index(two, {0.3, 0}, 0.8);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::AmbiguousRadius);
  }
}

TEST(Equilibria, ClassificationMatchesFiniteDifferences) {
  const auto disc = ScalarField::parse("x1^2 + x2^2 + 1");
  const auto ring = ScalarField::parse("x1^2 + x2^2 - 1");
  const auto one = ScalarField::parse("1");
  const auto em = VectorField::parse("-x2", "x1");
  const auto ep = VectorField::parse("x2", "-x1");
  const auto saddle = VectorField::parse("-x2", "-x1");  // JE = (x1, -x2)
  EXPECT_EQ(classify_zero(disc, em, {0, 0}), ZeroKind::Sink);
  EXPECT_EQ(classify_zero(ring, ep, {0, 0}), ZeroKind::Sink);
  EXPECT_EQ(classify_zero(ring, em, {0, 0}), ZeroKind::Source);
  EXPECT_EQ(classify_zero(one, saddle, {0, 0}), ZeroKind::Other);
  for (const auto* f : {&disc, &ring, &one})
    for (const auto* e : {&em, &ep, &saddle})
      EXPECT_EQ(classify_zero(*f, *e, {0, 0}), fd_kind(*f, *e, {0, 0}));
}

TEST(Equilibria, ClassificationSymmetries) {
  const auto f = ScalarField::parse("x1^2 + x2^2 + 1");
  const auto e = VectorField::parse("-x2 + 0.3*x1", "x1 + 0.2*x2");
  const ZeroKind k = classify_zero(f, e, {0, 0});
  EXPECT_EQ(k, fd_kind(f, e, {0, 0}));
  EXPECT_EQ(classify_zero(f.flipped(), e, {0, 0}), k == ZeroKind::Sink ? ZeroKind::Source : ZeroKind::Sink);
  const auto f3 = ScalarField::parse("3*(x1^2 + x2^2 + 1)");
  const auto e7 = VectorField::parse("7*(-x2 + 0.3*x1)", "7*(x1 + 0.2*x2)");
  EXPECT_EQ(classify_zero(f3, e7, {0, 0}), k);
  const auto sad = VectorField::parse("-x2", "-x1");
  EXPECT_EQ(classify_zero(f.flipped(), sad, {0, 0}), ZeroKind::Other);
}

TEST(Equilibria, CenterIsMarginal) {
  // JE = (-x2, x1): a center
  const auto e = VectorField::parse("x1", "x2");
  try {
    classify_zero(ScalarField::parse("1"), e, {0, 0});
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::MarginalLinearization);
  }
}
