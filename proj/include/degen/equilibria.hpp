#pragma once

// Isolated zeros of E, their Poincaré index and their type for the flow
// ẋ = JE/f.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "degen/error.hpp"
#include "degen/field.hpp"
#include "degen/levelset.hpp"
#include "degen/ring_index.hpp"

namespace degen {

enum class ZeroKind { Source, Sink, Other };

constexpr const char* to_string(ZeroKind k) {
  switch (k) {
    case ZeroKind::Source: return "Source";
    case ZeroKind::Sink: return "Sink";
    case ZeroKind::Other: return "Other";
  }
  return "?";
}

struct Equilibrium {
  Vec2 position;
  int poincare_index = 0;
  ZeroKind kind = ZeroKind::Other;
  double f_value = 0.0;
};

struct ZeroSearchOptions {
  double eps_zero = 1e-10;
  double step_tol = 1e-12;
  int max_iterations = 200;
  double merge_distance = 1e-6;
  double ring_clearance = 1e-4;
};

struct Diagnostic {
  ErrorCode code;
  std::string message;
};

namespace detail {

// Newton on E from p; false if it leaves the box or does not converge.
inline bool newton_zero(const VectorField& e, Vec2& p, const Domain& box,
                        const ZeroSearchOptions& opt) {
  for (int it = 0; it < opt.max_iterations; ++it) {
    const Vec2 v = e(p);
    const auto [g1, g2] = e.jacobian(p);
    const double det = g1.x * g2.y - g1.y * g2.x;
    if (det == 0.0 || !std::isfinite(det)) return norm(v) < opt.eps_zero;
    const Vec2 step{-(g2.y * v.x - g1.y * v.y) / det, -(-g2.x * v.x + g1.x * v.y) / det};
    p += step;
    if (!box.contains(p)) return false;
    if (norm(e(p)) < opt.eps_zero && norm(step) < opt.step_tol) return true;
  }
  return norm(e(p)) < opt.eps_zero;
}

}  // namespace detail

/// Zeros of E seeded from grid cells where both components change sign
/// (zero counted as positive), polished by Newton and merged. Zeros within
/// ring_clearance of a ring are dropped with a ZeroOnRing diagnostic;
/// diverging seeds produce NewtonDivergence diagnostics.
inline std::vector<Vec2> find_zeros(const VectorField& e, const Domain& dom,
                                    const std::vector<Ring>& rings = {},
                                    std::vector<Diagnostic>* diagnostics = nullptr,
                                    const ZeroSearchOptions& opt = {}) {
  dom.validate();
  const int n = dom.grid_n;
  const double hx = (dom.xmax - dom.xmin) / n, hy = (dom.ymax - dom.ymin) / n;
  auto node = [&](int i, int j) -> Vec2 {
    return {i == n ? dom.xmax : dom.xmin + i * hx, j == n ? dom.ymax : dom.ymin + j * hy};
  };
  std::vector<Vec2> vals(static_cast<std::size_t>(n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) vals[static_cast<std::size_t>(j) * (n + 1) + i] = e(node(i, j));
  auto at = [&](int i, int j) { return vals[static_cast<std::size_t>(j) * (n + 1) + i]; };
  auto report = [&](ErrorCode code, std::string msg) {
    if (diagnostics) diagnostics->push_back({code, std::move(msg)});
  };

  const Domain box{dom.xmin - hx, dom.xmax + hx, dom.ymin - hy, dom.ymax + hy, dom.grid_n};
  std::vector<Vec2> zeros;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const Vec2 c[4] = {at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)};
      bool p1 = false, n1 = false, p2 = false, n2 = false;
      for (const Vec2& v : c) {
        (v.x >= 0 ? p1 : n1) = true;
        (v.y >= 0 ? p2 : n2) = true;
      }
      if (!(p1 && n1 && p2 && n2)) continue;
      const Vec2 seed = node(i, j) + Vec2{0.5 * hx, 0.5 * hy};
      Vec2 z = seed;
      if (!detail::newton_zero(e, z, box, opt)) {
        report(ErrorCode::NewtonDivergence, "Newton did not converge from seed " + detail::point_str(seed));
        continue;
      }
      if (!dom.contains(z)) continue;
      const bool dup = std::any_of(zeros.begin(), zeros.end(),
                                   [&](Vec2 q) { return distance(q, z) <= opt.merge_distance; });
      if (!dup) zeros.push_back(z);
    }

  std::vector<Vec2> kept;
  for (const Vec2& z : zeros) {
    const bool on_ring = std::any_of(rings.begin(), rings.end(), [&](const Ring& r) {
      return r.distance_to(z) < opt.ring_clearance;
    });
    if (on_ring)
      report(ErrorCode::ZeroOnRing, "zero at " + detail::point_str(z) + " lies on a degeneracy ring");
    else
      kept.push_back(z);
  }
  std::sort(kept.begin(), kept.end(), [](Vec2 a, Vec2 b) { return a.x != b.x ? a.x < b.x : a.y < b.y; });
  return kept;
}

/// Winding of E around the circle of the given radius about z; the result
/// must not change when the radius is halved.
inline int poincare_index(const VectorField& e, Vec2 z, double radius) {
  auto circle = [&](double r) {
    return [z, r](double t) {
      const double a = 2 * std::numbers::pi * t;
      return z + r * Vec2{std::cos(a), std::sin(a)};
    };
  };
  const int outer = detail::winding_along(circle(radius), e, 64, std::size_t{1} << 14, ErrorCode::ZeroOnCircle);
  const int inner =
      detail::winding_along(circle(0.5 * radius), e, 64, std::size_t{1} << 14, ErrorCode::ZeroOnCircle);
  if (outer != inner)
    throw Error(ErrorCode::AmbiguousRadius, "index " + std::to_string(outer) + " at radius " +
                                                std::to_string(radius) + " but " +
                                                std::to_string(inner) + " at half radius");
  return outer;
}

/// Linearization of V = JE/f at a zero of E: D(JE)(z)/f(z).
inline ZeroKind classify_zero(const ScalarField& f, const VectorField& e, Vec2 z) {
  const double fz = f(z);
  if (fz == 0.0) throw Error(ErrorCode::ZeroOnRing, "zero at " + detail::point_str(z) + " has f = 0");
  const auto [g1, g2] = e.jacobian(z);
  // rows of D(JE) = (-∇E2, ∇E1)
  const double a = -g2.x / fz, b = -g2.y / fz, c = g1.x / fz, d = g1.y / fz;
  const double tr = a + d, det = a * d - b * c;
  const double scale = std::sqrt(a * a + b * b + c * c + d * d);
  const double eps = 1e-8 * scale;
  const double disc = tr * tr - 4 * det;
  double re1, re2;
  if (disc >= 0) {
    const double r = std::sqrt(disc);
    re1 = 0.5 * (tr - r);
    re2 = 0.5 * (tr + r);
  } else {
    re1 = re2 = 0.5 * tr;
  }
  if (re1 < -eps && re2 > eps) return ZeroKind::Other;
  if (std::abs(re1) <= eps || std::abs(re2) <= eps)
    throw Error(ErrorCode::MarginalLinearization,
                "eigenvalue with vanishing real part at " + detail::point_str(z));
  return re1 > 0 ? ZeroKind::Source : ZeroKind::Sink;
}

}  // namespace degen
