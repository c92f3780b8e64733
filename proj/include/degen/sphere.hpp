#pragma once

// Two-chart atlas of S² with transition w = 1/z, compactification of
// polynomial planar flows, and the merged feature catalog.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "degen/analysis.hpp"
#include "degen/polynomial.hpp"

namespace degen {

enum class Chart { North, South };

constexpr const char* to_string(Chart c) { return c == Chart::North ? "north" : "south"; }

struct ChartFlow {
  ScalarField f;
  VectorField e;
};

struct SphereFlow {
  ChartFlow north;
  ChartFlow south;
  double dedup_radius = 1.0;
};

namespace detail {

// |w|^(2d)·p(1/w) for p of degree ≤ d, with 1/w = (w1, -w2)/|w|².
inline Poly2 invert_polynomial(const Poly2& p, int d) {
  const Poly2 r2 = Poly2::monomial(2, 0) + Poly2::monomial(0, 2);
  Poly2 out;
  for (const auto& [m, c] : p.terms()) {
    const auto [i, j] = m;
    Poly2 term = Poly2::monomial(i, j, (j % 2 == 0) ? c : -c);
    out = out + term * r2.pow(d - i - j);
  }
  return out;
}

}  // namespace detail

/// South chart of a polynomial planar flow. With G = JE read as a complex
/// function, the south flow is -w²·G(1/w) and f_s = f(1/w), each multiplied
/// by the power of |w|² that clears poles and then reduced by every common
/// factor |w|². These positive factors change neither zero sets, signs nor
/// flow directions.
inline SphereFlow compactify(const ScalarField& f, const VectorField& e) {
  const Poly2 pf = to_polynomial(f.expr());
  Poly2 pe1 = to_polynomial(e.e1()), pe2 = to_polynomial(e.e2());
  const double fsign = f.sign_flip() ? -1.0 : 1.0, esign = e.sign_flip() ? -1.0 : 1.0;
  pe1 = esign * pe1;
  pe2 = esign * pe2;

  const Poly2 fs = detail::invert_polynomial(fsign * pf, pf.degree()).strip_radius_factors().pruned(1e-14);

  // G = JE = (-E2, E1)
  const Poly2 g1 = -pe2, g2 = pe1;
  const int d = std::max(g1.degree(), g2.degree());
  const Poly2 h1 = detail::invert_polynomial(g1, d), h2 = detail::invert_polynomial(g2, d);
  const Poly2 a = Poly2::monomial(2, 0) - Poly2::monomial(0, 2), b = Poly2::monomial(1, 1, 2.0);
  // -w²·H
  Poly2 s1 = -(a * h1 - b * h2), s2 = -(a * h2 + b * h1);
  while (!(s1.is_zero() && s2.is_zero())) {
    auto q1 = s1.is_zero() ? std::optional<Poly2>(Poly2{}) : s1.divide_by_radius_squared();
    auto q2 = s2.is_zero() ? std::optional<Poly2>(Poly2{}) : s2.divide_by_radius_squared();
    if (!q1 || !q2) break;
    s1 = std::move(*q1);
    s2 = std::move(*q2);
  }
  s1 = s1.pruned(1e-14);
  s2 = s2.pruned(1e-14);

  if (std::abs(fs(0, 0)) <= 1e-12 * std::max(1.0, fs.max_abs_coefficient()) &&
      std::abs(fs.coefficient(1, 0)) <= 1e-12 * fs.max_abs_coefficient() &&
      std::abs(fs.coefficient(0, 1)) <= 1e-12 * fs.max_abs_coefficient())
    throw Error(ErrorCode::SouthPoleDegenerate, "the degeneracy set is singular at infinity");

  // E_s = -J·G_s = (G_s2, -G_s1)
  SphereFlow sf{{f, e}, {ScalarField(fs.to_expr()), VectorField(s2.to_expr(), (-s1).to_expr())}, 1.0};
  return sf;
}

struct CatalogRing {
  Chart chart;
  RingResult result;
};

struct CatalogZero {
  Chart chart;
  Equilibrium eq;
};

struct ChartDiagnostic {
  Chart chart;
  Diagnostic diagnostic;
};

struct SphereCatalog {
  std::vector<CatalogRing> rings;
  std::vector<CatalogZero> zeros;
  std::vector<ChartDiagnostic> diagnostics;
  bool complete = true;
};

namespace detail {

inline Vec2 invert(Vec2 z) {
  const double r2 = dot(z, z);
  return {z.x / r2, -z.y / r2};
}

// complex product
inline Vec2 cmul(Vec2 a, Vec2 b) { return {a.x * b.x - a.y * b.y, a.x * b.y + a.y * b.x}; }

inline double min_norm(const std::vector<Vec2>& v) {
  double m = std::numeric_limits<double>::infinity();
  for (const Vec2& p : v) m = std::min(m, norm(p));
  return m;
}
inline double max_norm(const std::vector<Vec2>& v) {
  double m = 0.0;
  for (const Vec2& p : v) m = std::max(m, norm(p));
  return m;
}

/// The pushed-forward north flow must be a positive multiple of the south
/// flow, and f must keep its sign, at sample points of 1/2 < |z| < 2.
inline void check_overlap(const SphereFlow& sf) {
  constexpr int kPoints = 64;
  const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int k = 0; k < kPoints; ++k) {
    const double r = 0.55 + 1.4 * (k % 8) / 7.0;
    const double t = 2 * std::numbers::pi * std::fmod(k * golden, 1.0);
    const Vec2 z{r * std::cos(t), r * std::sin(t)};
    const Vec2 w = invert(z);
    const Vec2 gn = sf.north.e.rotated(z);
    const Vec2 gs = sf.south.e.rotated(w);
    const Vec2 push = -1.0 * cmul(cmul(w, w), gn);
    const double np = norm(push), ns = norm(gs);
    const std::string where = "at z = " + point_str(z);
    if (np > 1e-9 && ns > 1e-9) {
      if (std::abs(cross(push, gs)) > 1e-6 * np * ns || dot(push, gs) <= 0.0)
        throw Error(ErrorCode::OverlapMismatch, "chart flows are not positively parallel " + where);
    } else if ((np > 1e-9) != (ns > 1e-9)) {
      throw Error(ErrorCode::OverlapMismatch, "only one chart flow vanishes " + where);
    }
    const double fn = sf.north.f(z), fsv = sf.south.f(w);
    const double scale_n = std::max(1e-300, norm(sf.north.f.grad(z))), scale_s = std::max(1e-300, norm(sf.south.f.grad(w)));
    if (std::abs(fn) > 1e-9 * scale_n && std::abs(fsv) > 1e-9 * scale_s && (fn > 0) != (fsv > 0))
      throw Error(ErrorCode::OverlapMismatch, "f changes sign between charts " + where);
  }
}

}  // namespace detail

/// Analyzes both charts on `dom` and keeps each feature in the chart that
/// sees it within chart-norm dedup_radius (north wins ties). A south ring
/// that straddles the unit circle is kept when the north domain cannot see
/// all of it.
inline SphereCatalog analyze_sphere(const SphereFlow& sf, const Domain& dom,
                                    const AnalysisOptions& opt = {}) {
  detail::check_overlap(sf);
  auto run = [&](const ChartFlow& c, Chart tag) {
    try {
      return analyze_chart(c.f, c.e, dom, opt);
    } catch (const Error& err) {
      throw err.tagged(std::string(to_string(tag)) + " chart");
    }
  };
  const ChartAnalysis north = run(sf.north, Chart::North);
  const ChartAnalysis south = run(sf.south, Chart::South);
  const double rad = sf.dedup_radius;
  const double tol = 1e-9;

  SphereCatalog cat;
  cat.complete = north.complete && south.complete;
  for (const Diagnostic& d : north.diagnostics) cat.diagnostics.push_back({Chart::North, d});
  for (const Diagnostic& d : south.diagnostics) cat.diagnostics.push_back({Chart::South, d});

  for (const RingResult& r : north.rings)
    if (detail::min_norm(r.ring.vertices) <= rad + tol) cat.rings.push_back({Chart::North, r});
  for (const RingResult& r : south.rings) {
    const double lo = detail::min_norm(r.ring.vertices), hi = detail::max_norm(r.ring.vertices);
    bool keep = hi < rad - tol;
    if (!keep && lo < rad) {
      keep = std::any_of(r.ring.vertices.begin(), r.ring.vertices.end(), [&](Vec2 w) {
        return norm(w) == 0.0 || !dom.contains(detail::invert(w));
      });
    }
    if (keep) cat.rings.push_back({Chart::South, r});
  }
  for (const CatalogRing& r : cat.rings)
    if (r.result.error) cat.complete = false;

  for (const Equilibrium& z : north.zeros)
    if (norm(z.position) <= rad + tol) cat.zeros.push_back({Chart::North, z});
  for (const Equilibrium& z : south.zeros)
    if (norm(z.position) < rad - tol) cat.zeros.push_back({Chart::South, z});

  // Parts of open curves inside one chart's unit disc must belong to a ring
  // kept from the other chart; otherwise a component was seen by neither.
  auto covered = [&](Vec2 p, Chart other) {
    if (norm(p) == 0.0) return false;
    const Vec2 q = detail::invert(p);
    const double reach = 4.0 * dom.cell_size() * std::max(1.0, dot(q, q));
    return std::any_of(cat.rings.begin(), cat.rings.end(), [&](const CatalogRing& r) {
      return r.chart == other && r.result.ring.distance_to(q) <= reach;
    });
  };
  auto check_open = [&](const ChartAnalysis& a, Chart here, Chart other) {
    for (const OpenCurve& c : a.open_curves)
      for (const Vec2& p : c.vertices)
        if (norm(p) < rad - tol && !covered(p, other)) {
          cat.diagnostics.push_back(
              {here, {ErrorCode::IncompleteCatalog,
                      "degeneracy curve through " + detail::point_str(p) +
                          " is not closed in either chart"}});
          cat.complete = false;
          return;
        }
  };
  check_open(north, Chart::North, Chart::South);
  check_open(south, Chart::South, Chart::North);
  return cat;
}

}  // namespace degen
