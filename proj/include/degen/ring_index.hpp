#pragma once

// Tangency count, ring index and winding number of a vector field E along
// a degeneracy ring, plus the ring classification they induce.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "degen/error.hpp"
#include "degen/field.hpp"
#include "degen/levelset.hpp"

namespace degen {

enum class RingClass { Annihilation, Creation, Collapsible };

struct Classification {
  RingClass kind = RingClass::Collapsible;
  int m = 0;  // tangency count, meaningful for Collapsible

  friend bool operator==(const Classification&, const Classification&) = default;
};

inline std::string to_string(const Classification& c) {
  switch (c.kind) {
    case RingClass::Annihilation: return "Annihilation";
    case RingClass::Creation: return "Creation";
    case RingClass::Collapsible: return "Collapsible(" + std::to_string(c.m) + ")";
  }
  return "?";
}

struct RingReport {
  int m = 0;
  int rind = 0;
  int winding = 0;
  Classification classification;
  std::vector<double> tangency_points;  // arc-length positions from vertex 0
  int g_sign = 0;                       // sign of ⟨JE,∇f⟩ when m == 0, else 0
};

struct RingIndexOptions {
  double eps_reducible = 1e-7;
  double eps_E_rel = 1e-9;
  double touch_rel = 1e-9;         // |g| minimum below this (relative) without a crossing
  double position_tol_rel = 1e-8;  // bisection tolerance on arc length
  std::size_t min_samples = 2048;
  std::size_t max_winding_samples = std::size_t{1} << 14;
};

struct TangencyCount {
  int m = 0;
  std::vector<double> points;
};

/// The system (f, E) with the ring's orientation sign applied to both
/// factors. f·ẋ = JE and (−f)·ẋ = J(−E) are the same flow, so this is the
/// representative whose f satisfies the counter-clockwise convention.
inline std::pair<ScalarField, VectorField> oriented_system(const ScalarField& f,
                                                           const VectorField& e,
                                                           const Ring& ring) {
  return {f.with_flip(f.sign_flip() != ring.f_sign_flipped),
          e.with_flip(e.sign_flip() != ring.f_sign_flipped)};
}

namespace detail {

inline int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

/// Arc-length parametrization of a ring, projected back onto {f = 0}.
class RingParametrization {
 public:
  RingParametrization(const ScalarField& f, const Ring& ring)
      : f_(f), ring_(ring), cumulative_(ring.cumulative_length()) {}

  double length() const { return cumulative_.back(); }
  const std::vector<double>& cumulative() const { return cumulative_; }

  Vec2 operator()(double s) const {
    Vec2 p = ring_.point_at(s, cumulative_);
    for (int k = 0; k < 2; ++k) {
      const Vec2 g = f_.grad(p);
      const double g2 = dot(g, g);
      if (g2 == 0.0) break;
      p -= (f_(p) / g2) * g;
    }
    return p;
  }

 private:
  const ScalarField& f_;
  const Ring& ring_;
  std::vector<double> cumulative_;
};

struct RingSamples {
  std::vector<double> s;
  std::vector<Vec2> p;
};

inline RingSamples sample_ring(const Ring& ring, const RingParametrization& param,
                               std::size_t min_samples) {
  const std::size_t n = ring.size();
  const std::size_t per = std::max<std::size_t>(1, (min_samples + n - 1) / n);
  RingSamples out;
  out.s.reserve(n * per);
  out.p.reserve(n * per);
  const auto& cum = param.cumulative();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t q = 0; q < per; ++q) {
      const double s = cum[i] + (cum[i + 1] - cum[i]) * static_cast<double>(q) / per;
      out.s.push_back(s);
      out.p.push_back(q == 0 ? ring.vertex(i) : param(s));
    }
  }
  return out;
}

/// Winding of E along a closed curve c(t), t in [0,1), by angle
/// accumulation. Doubles the sampling until every step turns less than π/2.
inline int winding_along(const std::function<Vec2(double)>& curve, const VectorField& e,
                         std::size_t initial, std::size_t max_samples, ErrorCode zero_code) {
  std::size_t n = std::max<std::size_t>(initial, 8);
  const std::size_t cap = std::max(max_samples, n);
  while (true) {
    std::vector<Vec2> values(n);
    double emax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      values[i] = e(curve(static_cast<double>(i) / n));
      emax = std::max(emax, norm(values[i]));
    }
    for (const Vec2& v : values)
      if (!(norm(v) > 1e-9 * emax))
        throw Error(zero_code, "vector field vanishes on the curve");
    double total = 0.0;
    bool coarse = false;
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 a = values[i];
      const Vec2 b = values[(i + 1) % n];
      const double step = std::atan2(cross(a, b), dot(a, b));
      if (std::abs(step) >= std::numbers::pi / 2) {
        coarse = true;
        break;
      }
      total += step;
    }
    if (!coarse) return static_cast<int>(std::lround(total / (2 * std::numbers::pi)));
    if (n * 2 > cap)
      throw Error(ErrorCode::StepTooCoarse,
                  "angle step >= pi/2 with " + std::to_string(n) + " samples");
    n *= 2;
  }
}

}  // namespace detail

/// Counts the sign changes of g = ⟨JE,∇f⟩ around the ring.
inline TangencyCount tangency_count(const ScalarField& f, const VectorField& e, const Ring& ring,
                                    const RingIndexOptions& opt = {}) {
  const auto [fo, eo] = oriented_system(f, e, ring);
  const detail::RingParametrization param(fo, ring);
  const detail::RingSamples smp = detail::sample_ring(ring, param, opt.min_samples);
  const std::size_t n = smp.s.size();
  const double l = param.length();

  std::vector<double> g(n);
  double emax = 0.0, gradmax = 0.0;
  std::vector<double> enorm(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 ev = eo(smp.p[i]);
    const Vec2 gf = fo.grad(smp.p[i]);
    g[i] = dot(rotate_quarter(ev), gf);
    enorm[i] = norm(ev);
    emax = std::max(emax, enorm[i]);
    gradmax = std::max(gradmax, norm(gf));
  }
  for (std::size_t i = 0; i < n; ++i)
    if (!(enorm[i] > opt.eps_E_rel * emax))
      throw Error(ErrorCode::ZeroOnRing, "E vanishes on the ring near " + detail::point_str(smp.p[i]));
  const double scale = emax * gradmax;
  std::size_t tiny = 0;
  for (double v : g) tiny += std::abs(v) < opt.eps_reducible * scale;
  if (tiny * 100 >= n * 99)
    throw Error(ErrorCode::ReducibleDegeneracy, "JE is tangent to the ring almost everywhere");

  auto g_at = [&](double s) { return tangency_function(fo, eo, param(s)); };
  const double tol = opt.position_tol_rel * l;
  auto bisect = [&](double a, double b, int sign_a) {
    while (b - a > tol) {
      const double mid = 0.5 * (a + b);
      const int sm = detail::sign_of(g_at(mid));
      if (sm == 0) return mid;
      (sm == sign_a ? a : b) = mid;
    }
    return 0.5 * (a + b);
  };
  auto wrap = [&](double s) {
    s = std::fmod(s, l);
    return s < 0.0 ? s + l : s;
  };

  const double zero_level = 1e-14 * scale;
  std::vector<int> sg(n);
  for (std::size_t i = 0; i < n; ++i) sg[i] = std::abs(g[i]) <= zero_level ? 0 : detail::sign_of(g[i]);

  TangencyCount out;
  std::size_t i0 = 0;
  while (i0 < n && sg[i0] == 0) ++i0;
  if (i0 == n) throw Error(ErrorCode::ReducibleDegeneracy, "<JE, grad f> vanishes at every sample");

  std::size_t last = i0;
  bool zero_run = false;
  for (std::size_t k = 1; k <= n; ++k) {
    const std::size_t idx = (i0 + k) % n;
    if (sg[idx] == 0) {
      zero_run = true;
      continue;
    }
    const double sa = smp.s[last];
    double sb = smp.s[idx];
    if (sb <= sa) sb += l;
    if (sg[idx] != sg[last]) {
      out.points.push_back(wrap(bisect(sa, sb, sg[last])));
    } else if (zero_run) {
      throw Error(ErrorCode::NonSimpleTangency,
                  "<JE, grad f> touches zero without changing sign at s = " + std::to_string(sa));
    }
    zero_run = false;
    last = idx;
  }

  // Local minima of |g| between same-sign samples: either a hidden pair of
  // crossings or a tangential touch.
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t a = (i + n - 1) % n, b = (i + 1) % n;
    if (sg[i] == 0 || sg[a] != sg[i] || sg[b] != sg[i]) continue;
    if (!(std::abs(g[i]) <= std::abs(g[a]) && std::abs(g[i]) <= std::abs(g[b]))) continue;
    if (std::abs(g[i]) > 1e-3 * scale) continue;
    const int sigma = sg[i];
    double lo = smp.s[a], hi = smp.s[b];
    if (lo > smp.s[i]) lo -= l;
    if (hi < smp.s[i]) hi += l;
    // golden-section search for the minimum of sigma·g
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    double f1 = sigma * g_at(x1), f2 = sigma * g_at(x2);
    for (int it = 0; it < 60 && hi - lo > tol; ++it) {
      if (f1 < f2) {
        hi = x2; x2 = x1; f2 = f1;
        x1 = hi - phi * (hi - lo);
        f1 = sigma * g_at(x1);
      } else {
        lo = x1; x1 = x2; f1 = f2;
        x2 = lo + phi * (hi - lo);
        f2 = sigma * g_at(x2);
      }
    }
    const double smin = f1 < f2 ? x1 : x2;
    const double gmin = std::min(f1, f2);
    if (gmin < 0.0) {
      double left = smp.s[a], right = smp.s[b];
      if (left > smp.s[i]) left -= l;
      if (right < smp.s[i]) right += l;
      out.points.push_back(wrap(bisect(left, smin, sigma)));
      out.points.push_back(wrap(bisect(smin, right, -sigma) ));
    } else if (gmin <= opt.touch_rel * scale) {
      throw Error(ErrorCode::NonSimpleTangency,
                  "<JE, grad f> has a double zero near s = " + std::to_string(wrap(smin)));
    }
  }

  std::sort(out.points.begin(), out.points.end());
  out.m = static_cast<int>(out.points.size());
  return out;
}

inline int winding_number(const VectorField& e, const Ring& ring,
                          const RingIndexOptions& opt = {}) {
  const std::vector<double> cum = ring.cumulative_length();
  const double l = cum.back();
  return detail::winding_along([&](double t) { return ring.point_at(t * l, cum); }, e, ring.size(),
                               opt.max_winding_samples, ErrorCode::ZeroOnRing);
}

/// Ring index from the tangency count, cross-checked against the
/// arc-length mean of sign g and, for rotating fields, the work integral
/// of E along J∇f.
inline int ring_index(const ScalarField& f, const VectorField& e, const Ring& ring,
                      const TangencyCount& tc, const RingIndexOptions& opt = {}) {
  const auto [fo, eo] = oriented_system(f, e, ring);
  const detail::RingParametrization param(fo, ring);
  const detail::RingSamples smp = detail::sample_ring(ring, param, opt.min_samples);
  const std::size_t n = smp.s.size();
  const double l = param.length();

  if (tc.m == 0) {
    const int sign0 = detail::sign_of(tangency_function(fo, eo, smp.p[0]));
    double mean_sign = 0.0;
    double work = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double w = (i + 1 < n ? smp.s[i + 1] : l) - smp.s[i];
      const Vec2 p = param(smp.s[i] + 0.5 * w);
      const int sg = detail::sign_of(tangency_function(fo, eo, p));
      if (detail::sign_of(tangency_function(fo, eo, smp.p[i])) != sign0 || sg != sign0)
        throw Error(ErrorCode::CrossCheckMismatch, "sign of <JE, grad f> is not uniform");
      mean_sign += sg * w;
      work += dot(eo(p), rotate_quarter(fo.grad(p))) * w;
    }
    mean_sign /= l;
    if (std::abs(mean_sign - sign0) > 1e-9)
      throw Error(ErrorCode::CrossCheckMismatch, "arc-length mean of sign g is not +-1");
    if (-detail::sign_of(work) != sign0)
      throw Error(ErrorCode::CrossCheckMismatch, "work integral disagrees with sign g");
    return sign0;
  }

  // sum of interval indices between consecutive tangency points
  int total = 0;
  for (int k = 0; k < tc.m; ++k) {
    const double a = tc.points[k];
    double b = tc.points[(k + 1) % tc.m];
    if (b <= a) b += l;
    total += detail::sign_of(tangency_function(fo, eo, param(0.5 * (a + b))));
  }
  if (total != 0)
    throw Error(ErrorCode::CrossCheckMismatch,
                "interval indices do not cancel (sum " + std::to_string(total) + ")");
  return 0;
}

inline int ring_index(const ScalarField& f, const VectorField& e, const Ring& ring,
                      const RingIndexOptions& opt = {}) {
  return ring_index(f, e, ring, tangency_count(f, e, ring, opt), opt);
}

inline Classification classify_ring(const RingReport& report) {
  if (report.rind == -1) return {RingClass::Annihilation, report.m};
  if (report.rind == 1) return {RingClass::Creation, report.m};
  return {RingClass::Collapsible, report.m};
}

inline RingReport analyze_ring(const ScalarField& f, const VectorField& e, const Ring& ring,
                               const RingIndexOptions& opt = {}) {
  RingReport r;
  const TangencyCount tc = tangency_count(f, e, ring, opt);
  r.m = tc.m;
  r.tangency_points = tc.points;
  r.rind = ring_index(f, e, ring, tc, opt);
  r.g_sign = tc.m == 0 ? r.rind : 0;
  r.winding = winding_number(e, ring, opt);
  r.classification = classify_ring(r);
  return r;
}

}  // namespace degen
