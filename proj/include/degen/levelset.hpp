#pragma once

// Zero level set extraction: marching squares over a uniform grid, edge
// crossings polished by safeguarded Newton, saddle cells resolved by
// recursive subdivision, then chain assembly into rings and open curves.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "degen/error.hpp"
#include "degen/field.hpp"
#include "degen/vec2.hpp"

namespace degen {

struct Domain {
  double xmin = -2.0;
  double xmax = 2.0;
  double ymin = -2.0;
  double ymax = 2.0;
  int grid_n = 256;

  void validate() const {
    if (!(xmin < xmax) || !(ymin < ymax))
      throw Error(ErrorCode::InvalidDomain, "domain bounds must satisfy min < max");
    if (grid_n < 16) throw Error(ErrorCode::InvalidDomain, "grid_n must be at least 16");
    if (!std::isfinite(xmin) || !std::isfinite(xmax) || !std::isfinite(ymin) ||
        !std::isfinite(ymax))
      throw Error(ErrorCode::InvalidDomain, "domain bounds must be finite");
  }

  double diagonal() const { return std::hypot(xmax - xmin, ymax - ymin); }
  double cell_size() const { return std::max(xmax - xmin, ymax - ymin) / grid_n; }

  bool contains(Vec2 p) const {
    return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
  }
};

struct LevelSetOptions {
  double eps_f = 1e-10;
  double eps_regular_rel = 1e-6;
  int max_subdivision_depth = 6;
  std::size_t max_components = 64;
};

/// Closed, counter-clockwise polyline approximating one compact component
/// of {f = 0}. The last vertex connects back to the first.
struct Ring {
  std::vector<Vec2> vertices;
  double arc_length = 0.0;
  bool f_sign_flipped = false;
  double min_grad_norm = 0.0;

  std::size_t size() const { return vertices.size(); }
  const Vec2& vertex(std::size_t i) const { return vertices[i % vertices.size()]; }

  double signed_area() const {
    double a = 0.0;
    for (std::size_t i = 0; i < vertices.size(); ++i) a += cross(vertex(i), vertex(i + 1));
    return 0.5 * a;
  }

  Vec2 centroid() const {
    Vec2 c;
    double len = 0.0;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      const double l = distance(vertex(i), vertex(i + 1));
      c += l * (0.5 * (vertex(i) + vertex(i + 1)));
      len += l;
    }
    return len > 0.0 ? c / len : vertices.front();
  }

  /// Cumulative arc length at each vertex; back() is the full length.
  std::vector<double> cumulative_length() const {
    std::vector<double> s(vertices.size() + 1, 0.0);
    for (std::size_t i = 0; i < vertices.size(); ++i)
      s[i + 1] = s[i] + distance(vertex(i), vertex(i + 1));
    return s;
  }

  /// Point on the polyline at arc length s (wrapped into [0, l)).
  Vec2 point_at(double s, const std::vector<double>& cumulative) const {
    const double l = cumulative.back();
    s = std::fmod(s, l);
    if (s < 0.0) s += l;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), s);
    std::size_t i = static_cast<std::size_t>(std::distance(cumulative.begin(), it)) - 1;
    if (i >= vertices.size()) i = vertices.size() - 1;
    const double seg = cumulative[i + 1] - cumulative[i];
    const double t = seg > 0.0 ? (s - cumulative[i]) / seg : 0.0;
    return vertex(i) + t * (vertex(i + 1) - vertex(i));
  }

  /// Even-odd point-in-polygon test.
  bool encloses(Vec2 p) const {
    bool inside = false;
    for (std::size_t i = 0, n = vertices.size(); i < n; ++i) {
      const Vec2 a = vertex(i);
      const Vec2 b = vertex(i + 1);
      if ((a.y > p.y) != (b.y > p.y)) {
        const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
        if (p.x < x) inside = !inside;
      }
    }
    return inside;
  }

  double distance_to(Vec2 p) const {
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < vertices.size(); ++i)
      d = std::min(d, segment_distance(p, vertex(i), vertex(i + 1)));
    return d;
  }
};

/// Component of {f = 0} that leaves the domain at both ends.
struct OpenCurve {
  std::vector<Vec2> vertices;

  double distance_to(Vec2 p) const {
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < vertices.size(); ++i)
      d = std::min(d, segment_distance(p, vertices[i], vertices[i + 1]));
    if (vertices.size() == 1) d = distance(p, vertices.front());
    return d;
  }
};

struct LevelSet {
  std::vector<Ring> rings;
  std::vector<OpenCurve> open_curves;
  double eps_regular = 0.0;
};

/// Sets f_sign_flipped so that J∇f (under the flip) follows the traversal
/// direction at every vertex.
inline Ring orient_and_sign(const ScalarField& f, Ring ring) {
  const std::size_t n = ring.size();
  if (n < 3) throw Error(ErrorCode::InconsistentOrientation, "ring has fewer than 3 vertices");
  int positive = 0;
  int negative = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 tangent = ring.vertex(i + 1) - ring.vertex(i + n - 1);
    const double c = dot(rotate_quarter(f.grad(ring.vertex(i))), tangent);
    if (c > 0.0) ++positive;
    else if (c < 0.0) ++negative;
  }
  if (positive != static_cast<int>(n) && negative != static_cast<int>(n))
    throw Error(ErrorCode::InconsistentOrientation,
                "sign of <J grad f, tangent> varies along the ring (" + std::to_string(positive) +
                    " positive, " + std::to_string(negative) + " negative); refine the grid");
  ring.f_sign_flipped = negative == static_cast<int>(n);
  return ring;
}

namespace detail {

inline bool segments_cross(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const double d1 = cross(b - a, c - a);
  const double d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c);
  const double d4 = cross(d - c, b - c);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

inline bool polyline_is_simple(const std::vector<Vec2>& v) {
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = v[i];
    const Vec2 b = v[(i + 1) % n];
    const double minx = std::min(a.x, b.x), maxx = std::max(a.x, b.x);
    const double miny = std::min(a.y, b.y), maxy = std::max(a.y, b.y);
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      const Vec2 c = v[j];
      const Vec2 d = v[(j + 1) % n];
      if (std::max(c.x, d.x) < minx || std::min(c.x, d.x) > maxx ||
          std::max(c.y, d.y) < miny || std::min(c.y, d.y) > maxy)
        continue;
      if (segments_cross(a, b, c, d)) return false;
    }
  }
  return true;
}

class LevelSetExtractor {
 public:
  LevelSetExtractor(const ScalarField& f, const Domain& dom, const LevelSetOptions& opt)
      : f_(f), dom_(dom), opt_(opt), n_(dom.grid_n) {
    dom_.validate();
    hx_ = (dom_.xmax - dom_.xmin) / n_;
    hy_ = (dom_.ymax - dom_.ymin) / n_;
  }

  LevelSet run() {
    sample_grid();
    for (int j = 0; j < n_; ++j)
      for (int i = 0; i < n_; ++i) process_cell(i, j);
    return assemble();
  }

 private:
  struct Segment {
    std::int64_t a;
    std::int64_t b;
    std::vector<Vec2> interior;  // ordered from a to b
  };

  Vec2 node(int i, int j) const {
    return {i == n_ ? dom_.xmax : dom_.xmin + i * hx_, j == n_ ? dom_.ymax : dom_.ymin + j * hy_};
  }
  double value(int i, int j) const { return values_[static_cast<std::size_t>(j) * (n_ + 1) + i]; }
  std::int64_t h_edge(int i, int j) const { return (static_cast<std::int64_t>(j) * (n_ + 1) + i) * 2; }
  std::int64_t v_edge(int i, int j) const { return h_edge(i, j) + 1; }

  void sample_grid() {
    values_.resize(static_cast<std::size_t>(n_ + 1) * (n_ + 1));
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int j = 0; j <= n_; ++j)
      for (int i = 0; i <= n_; ++i) {
        const double v = f_(node(i, j));
        values_[static_cast<std::size_t>(j) * (n_ + 1) + i] = v;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    // relative regularity threshold: typical |∇f| over the domain
    eps_regular_ = opt_.eps_regular_rel * (hi - lo) / dom_.diagonal();
  }

  // Root of f on [a, b] given opposite signs (zero counts as positive).
  Vec2 polish(Vec2 a, double fa, Vec2 b, double fb) const {
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    const Vec2 d = b - a;
    double lo = 0.0, hi = 1.0;
    const bool lo_neg = fa < 0.0;
    double u = fa / (fa - fb);
    for (int it = 0; it < 100; ++it) {
      const Vec2 p = a + u * d;
      const double fu = f_(p);
      if (std::abs(fu) < opt_.eps_f || fu == 0.0) return p;
      if ((fu < 0.0) == lo_neg) lo = u;
      else hi = u;
      if (hi - lo < 1e-15) return p;
      const double slope = dot(f_.grad(p), d);
      double next = slope != 0.0 ? u - fu / slope : -1.0;
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      u = next;
    }
    return a + u * d;
  }

  Vec2 crossing(std::int64_t edge) {
    if (auto it = crossings_.find(edge); it != crossings_.end()) return it->second;
    const std::int64_t idx = edge / 2;
    const int i = static_cast<int>(idx % (n_ + 1));
    const int j = static_cast<int>(idx / (n_ + 1));
    const bool horizontal = edge % 2 == 0;
    const int i2 = horizontal ? i + 1 : i;
    const int j2 = horizontal ? j : j + 1;
    const Vec2 p = polish(node(i, j), value(i, j), node(i2, j2), value(i2, j2));
    crossings_.emplace(edge, p);
    return p;
  }

  // Newton on ∇f = 0 from the cell centre; Hessian by central differences
  // of the exact gradient. Throws if a critical point sits on {f = 0}.
  void check_critical_point(int i, int j) const {
    const Vec2 lo = node(i, j);
    const double h = std::max(hx_, hy_);
    Vec2 p = lo + Vec2{0.5 * hx_, 0.5 * hy_};
    const double delta = 1e-5 * h;
    for (int it = 0; it < 30; ++it) {
      const Vec2 g = f_.grad(p);
      const Vec2 gxp = f_.grad(p + Vec2{delta, 0.0});
      const Vec2 gxm = f_.grad(p - Vec2{delta, 0.0});
      const Vec2 gyp = f_.grad(p + Vec2{0.0, delta});
      const Vec2 gym = f_.grad(p - Vec2{0.0, delta});
      const double hxx = (gxp.x - gxm.x) / (2 * delta);
      const double hyy = (gyp.y - gym.y) / (2 * delta);
      const double hxy = 0.25 * ((gxp.y - gxm.y) + (gyp.x - gym.x)) / delta;
      const double det = hxx * hyy - hxy * hxy;
      const double hnorm = std::sqrt(hxx * hxx + hyy * hyy + 2 * hxy * hxy);
      if (!(std::abs(det) > 1e-14 * hnorm * hnorm) || hnorm == 0.0) return;
      const Vec2 step{-(hyy * g.x - hxy * g.y) / det, -(-hxy * g.x + hxx * g.y) / det};
      p += step;
      if (p.x < lo.x - hx_ || p.x > lo.x + 2 * hx_ || p.y < lo.y - hy_ || p.y > lo.y + 2 * hy_)
        return;
      if (norm(step) <= 1e-13 * h || (g.x == 0.0 && g.y == 0.0)) {
        const double fv = std::abs(f_(p));
        // on a quadratic model the smallest |∇f| along {f=0} is about
        // sqrt(2|f(p)|·|H|)
        const double limit = std::max(opt_.eps_f, eps_regular_ * eps_regular_ / (2 * hnorm));
        if (fv <= limit)
          throw Error(ErrorCode::NonRegularLevelSet,
                      "critical point of f on the zero set near " + detail::point_str(p));
        return;
      }
    }
  }

  void process_cell(int i, int j) {
    const double c[4] = {value(i, j), value(i + 1, j), value(i + 1, j + 1), value(i, j + 1)};
    const bool pos[4] = {c[0] >= 0, c[1] >= 0, c[2] >= 0, c[3] >= 0};
    // bottom, right, top, left
    const std::int64_t edges[4] = {h_edge(i, j), v_edge(i + 1, j), h_edge(i, j + 1), v_edge(i, j)};
    const bool crossed[4] = {pos[0] != pos[1], pos[1] != pos[2], pos[3] != pos[2], pos[0] != pos[3]};
    std::vector<std::int64_t> hit;
    for (int k = 0; k < 4; ++k)
      if (crossed[k]) hit.push_back(edges[k]);
    if (hit.empty()) {
      // no crossing, but f may still touch zero inside the cell
      const auto [lo, hi] = std::minmax({c[0], c[1], c[2], c[3]});
      if (std::min(std::abs(lo), std::abs(hi)) <= hi - lo) check_critical_point(i, j);
      return;
    }
    check_critical_point(i, j);
    if (hit.size() == 2) {
      segments_.push_back({hit[0], hit[1], {}});
      return;
    }
    resolve_saddle_cell(i, j, edges);
  }

  // Four crossings: connectivity decided on a finer sub-grid of the cell.
  void resolve_saddle_cell(int i, int j, const std::int64_t (&edges)[4]) {
    for (int depth = 1; depth <= opt_.max_subdivision_depth; ++depth) {
      if (try_subgrid(i, j, depth, edges)) return;
    }
    throw Error(ErrorCode::AmbiguousCell,
                "saddle cell at " + detail::point_str(node(i, j)) + " unresolved after subdivision");
  }

  bool try_subgrid(int i, int j, int depth, const std::int64_t (&parent_edges)[4]) {
    const int m = 1 << depth;
    const Vec2 origin = node(i, j);
    const double sx = hx_ / m, sy = hy_ / m;
    auto at = [&](int a, int b) -> Vec2 {
      return {a == m ? node(i + 1, j).x : origin.x + a * sx, b == m ? node(i, j + 1).y : origin.y + b * sy};
    };
    std::vector<double> g(static_cast<std::size_t>(m + 1) * (m + 1));
    auto gv = [&](int a, int b) -> double& { return g[static_cast<std::size_t>(b) * (m + 1) + a]; };
    for (int b = 0; b <= m; ++b)
      for (int a = 0; a <= m; ++a) gv(a, b) = f_(at(a, b));
    gv(0, 0) = value(i, j);
    gv(m, 0) = value(i + 1, j);
    gv(m, m) = value(i + 1, j + 1);
    gv(0, m) = value(i, j + 1);

    // each parent edge must carry exactly one crossing at this resolution
    auto changes = [&](auto&& sample) {
      int count = 0;
      for (int k = 0; k < m; ++k) count += (sample(k) >= 0) != (sample(k + 1) >= 0);
      return count;
    };
    const int side_changes[4] = {changes([&](int k) { return gv(k, 0); }),
                                 changes([&](int k) { return gv(m, k); }),
                                 changes([&](int k) { return gv(k, m); }),
                                 changes([&](int k) { return gv(0, k); })};
    for (int k = 0; k < 4; ++k)
      if (side_changes[k] != 1)
        throw Error(ErrorCode::AmbiguousCell,
                    "multiple crossings on one cell edge near " + detail::point_str(origin) + "; increase grid_n");

    // local edge ids on the (m+1)x(m+1) sub-grid
    auto lh = [&](int a, int b) { return (static_cast<std::int64_t>(b) * (m + 1) + a) * 2; };
    auto lv = [&](int a, int b) { return lh(a, b) + 1; };
    auto local_point = [&](std::int64_t e) {
      const std::int64_t idx = e / 2;
      const int a = static_cast<int>(idx % (m + 1));
      const int b = static_cast<int>(idx / (m + 1));
      const bool hor = e % 2 == 0;
      const int a2 = hor ? a + 1 : a, b2 = hor ? b : b + 1;
      return polish(at(a, b), gv(a, b), at(a2, b2), gv(a2, b2));
    };
    // which parent side a boundary local edge lies on, or -1
    auto boundary_side = [&](std::int64_t e) -> int {
      const std::int64_t idx = e / 2;
      const int a = static_cast<int>(idx % (m + 1));
      const int b = static_cast<int>(idx / (m + 1));
      if (e % 2 == 0) return b == 0 ? 0 : (b == m ? 2 : -1);
      return a == m ? 1 : (a == 0 ? 3 : -1);
    };

    std::unordered_map<std::int64_t, std::vector<std::int64_t>> adj;
    for (int b = 0; b < m; ++b)
      for (int a = 0; a < m; ++a) {
        const double c[4] = {gv(a, b), gv(a + 1, b), gv(a + 1, b + 1), gv(a, b + 1)};
        const bool p[4] = {c[0] >= 0, c[1] >= 0, c[2] >= 0, c[3] >= 0};
        const std::int64_t e[4] = {lh(a, b), lv(a + 1, b), lh(a, b + 1), lv(a, b)};
        const bool x[4] = {p[0] != p[1], p[1] != p[2], p[3] != p[2], p[0] != p[3]};
        std::vector<std::int64_t> hit;
        for (int k = 0; k < 4; ++k)
          if (x[k]) hit.push_back(e[k]);
        if (hit.size() == 4) return false;
        if (hit.size() == 2) {
          adj[hit[0]].push_back(hit[1]);
          adj[hit[1]].push_back(hit[0]);
        }
      }

    bool done[4] = {false, false, false, false};
    for (int side = 0; side < 4; ++side) {
      if (done[side]) continue;
      std::int64_t start = -1;
      for (const auto& [e, _] : adj)
        if (boundary_side(e) == side) start = e;
      if (start < 0) throw Error(ErrorCode::AmbiguousCell, "sub-grid trace lost a crossing");
      std::vector<Vec2> interior;
      std::int64_t prev = -1, cur = start;
      for (std::size_t guard = 0; guard < adj.size() + 2; ++guard) {
        const auto& nb = adj[cur];
        if (nb.empty() || (nb.size() == 1 && nb[0] == prev))
          throw Error(ErrorCode::AmbiguousCell, "sub-grid trace hit a dead end");
        const std::int64_t next = nb[0] == prev ? nb[1] : nb[0];
        prev = cur;
        cur = next;
        const int s2 = boundary_side(cur);
        if (s2 >= 0) {
          if (s2 == side) throw Error(ErrorCode::AmbiguousCell, "sub-grid trace returned to its side");
          done[side] = done[s2] = true;
          segments_.push_back({parent_edges[side], parent_edges[s2], std::move(interior)});
          break;
        }
        interior.push_back(local_point(cur));
      }
      if (!done[side]) throw Error(ErrorCode::AmbiguousCell, "sub-grid trace did not terminate");
    }
    return true;
  }

  bool on_domain_boundary(std::int64_t edge) const {
    const std::int64_t idx = edge / 2;
    const int i = static_cast<int>(idx % (n_ + 1));
    const int j = static_cast<int>(idx / (n_ + 1));
    if (edge % 2 == 0) return j == 0 || j == n_;
    return i == 0 || i == n_;
  }

  LevelSet assemble() {
    std::unordered_map<std::int64_t, std::vector<std::size_t>> adj;
    for (std::size_t s = 0; s < segments_.size(); ++s) {
      adj[segments_[s].a].push_back(s);
      adj[segments_[s].b].push_back(s);
    }
    std::vector<bool> used(segments_.size(), false);

    auto trace = [&](std::int64_t start_edge, std::size_t first_seg, bool closed) {
      std::vector<Vec2> pts{crossing(start_edge)};
      std::int64_t edge = start_edge;
      std::size_t seg = first_seg;
      while (true) {
        used[seg] = true;
        const Segment& sg = segments_[seg];
        const bool forward = sg.a == edge;
        if (forward) pts.insert(pts.end(), sg.interior.begin(), sg.interior.end());
        else pts.insert(pts.end(), sg.interior.rbegin(), sg.interior.rend());
        edge = forward ? sg.b : sg.a;
        if (closed && edge == start_edge) break;
        pts.push_back(crossing(edge));
        const auto& nb = adj[edge];
        if (nb.size() < 2) break;
        const std::size_t next = nb[0] == seg ? nb[1] : nb[0];
        if (used[next]) break;
        seg = next;
      }
      return pts;
    };

    LevelSet out;
    out.eps_regular = eps_regular_;
    std::vector<std::vector<Vec2>> closed_chains;
    for (std::size_t s = 0; s < segments_.size(); ++s) {
      if (used[s]) continue;
      for (std::int64_t e : {segments_[s].a, segments_[s].b}) {
        if (!used[s] && adj[e].size() == 1) {
          if (!on_domain_boundary(e))
            throw Error(ErrorCode::NonRegularLevelSet, "level set chain ends inside the domain");
          out.open_curves.push_back({dedupe(trace(e, s, false))});
        }
      }
    }
    for (std::size_t s = 0; s < segments_.size(); ++s) {
      if (used[s]) continue;
      closed_chains.push_back(dedupe(trace(segments_[s].a, s, true)));
    }
    if (out.open_curves.size() + closed_chains.size() > opt_.max_components)
      throw Error(ErrorCode::TooManyComponents,
                  std::to_string(out.open_curves.size() + closed_chains.size()) +
                      " components exceed the cap of " + std::to_string(opt_.max_components));

    for (auto& chain : closed_chains) {
      if (chain.size() > 1 && distance(chain.front(), chain.back()) == 0.0) chain.pop_back();
      if (chain.size() < 3) continue;  // sub-cell sliver, below grid resolution
      Ring ring;
      ring.vertices = std::move(chain);
      if (ring.signed_area() < 0.0) std::reverse(ring.vertices.begin(), ring.vertices.end());
      ring.arc_length = ring.cumulative_length().back();
      ring.min_grad_norm = std::numeric_limits<double>::infinity();
      for (const Vec2& v : ring.vertices) ring.min_grad_norm = std::min(ring.min_grad_norm, norm(f_.grad(v)));
      if (!(ring.min_grad_norm > eps_regular_))
        throw Error(ErrorCode::NonRegularLevelSet,
                    "|grad f| = " + std::to_string(ring.min_grad_norm) + " on the zero set");
      if (!polyline_is_simple(ring.vertices))
        throw Error(ErrorCode::NonRegularLevelSet, "extracted ring self-intersects");
      out.rings.push_back(orient_and_sign(f_, std::move(ring)));
    }
    for (const auto& c : out.open_curves)
      for (const Vec2& v : c.vertices)
        if (!(norm(f_.grad(v)) > eps_regular_))
          throw Error(ErrorCode::NonRegularLevelSet, "vanishing gradient on an open degeneracy curve");
    return out;
  }

  static std::vector<Vec2> dedupe(std::vector<Vec2> pts) {
    std::vector<Vec2> out;
    out.reserve(pts.size());
    for (const Vec2& p : pts)
      if (out.empty() || !(out.back() == p)) out.push_back(p);
    return out;
  }

  const ScalarField& f_;
  Domain dom_;
  LevelSetOptions opt_;
  int n_;
  double hx_ = 0.0, hy_ = 0.0;
  double eps_regular_ = 0.0;
  std::vector<double> values_;
  std::unordered_map<std::int64_t, Vec2> crossings_;
  std::vector<Segment> segments_;
};

}  // namespace detail

inline LevelSet extract_level_set(const ScalarField& f, const Domain& dom,
                                  const LevelSetOptions& opt = {}) {
  return detail::LevelSetExtractor(f, dom, opt).run();
}

}  // namespace degen
