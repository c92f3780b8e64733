#pragma once

// Degeneracy indices as formal sums a·(S1) + b·(Z1) and the generalized
// Poincaré–Hopf check over a sphere catalog.

#include <string>
#include <vector>

#include "degen/error.hpp"
#include "degen/sphere.hpp"

namespace degen {

struct IndexSum {
  int s1 = 0;  // coefficient of (S1), isolated zeros
  int z1 = 0;  // coefficient of (Z1), rings

  friend IndexSum operator+(IndexSum a, IndexSum b) { return {a.s1 + b.s1, a.z1 + b.z1}; }
  IndexSum& operator+=(IndexSum b) { return *this = *this + b; }
  friend bool operator==(IndexSum, IndexSum) = default;

  /// e.g. "2(S1)-1(Z1)"
  std::string str() const {
    return std::to_string(s1) + "(S1)" + (z1 < 0 ? "-" : "+") + std::to_string(z1 < 0 ? -z1 : z1) + "(Z1)";
  }
};

inline constexpr IndexSum kSphereIndex{2, -1};

/// Collapsible rings contribute nothing; a warning is appended when
/// `warnings` is given.
inline IndexSum index_of_ring(const Classification& c, std::vector<std::string>* warnings = nullptr) {
  switch (c.kind) {
    case RingClass::Annihilation: return {0, -1};
    case RingClass::Creation: return {0, 1};
    case RingClass::Collapsible: break;
  }
  if (warnings)
    warnings->push_back(to_string(c) + " ring has index 0 and is not robust under deformation");
  return {0, 0};
}

inline IndexSum index_of_zero(ZeroKind k) {
  switch (k) {
    case ZeroKind::Source: return {1, 0};
    case ZeroKind::Sink: return {1, -1};
    case ZeroKind::Other: break;
  }
  throw Error(ErrorCode::UnsupportedZeroKind, "no degeneracy index is defined for this zero");
}

struct PoincareHopfVerdict {
  IndexSum sum;
  bool holds = false;
  std::vector<std::string> warnings;
};

inline PoincareHopfVerdict check_poincare_hopf(const SphereCatalog& cat) {
  if (!cat.complete) {
    std::string why = "catalog is incomplete";
    for (const ChartDiagnostic& d : cat.diagnostics)
      if (d.diagnostic.code != ErrorCode::MarginalLinearization &&
          d.diagnostic.code != ErrorCode::NewtonDivergence) {
        why += "; " + std::string(to_string(d.chart)) + ": " + d.diagnostic.message;
        break;
      }
    for (const CatalogRing& r : cat.rings)
      if (r.result.error) {
        why += "; " + std::string(to_string(r.chart)) + " ring: " + r.result.error->message;
        break;
      }
    throw Error(ErrorCode::IncompleteCatalog, why);
  }
  PoincareHopfVerdict v;
  for (const CatalogRing& r : cat.rings) v.sum += index_of_ring(r.result.report->classification, &v.warnings);
  for (const CatalogZero& z : cat.zeros) {
    try {
      v.sum += index_of_zero(z.eq.kind);
    } catch (const Error& err) {
      throw err.tagged(std::string(to_string(z.chart)) + " zero at " + detail::point_str(z.eq.position));
    }
  }
  v.holds = v.sum == kSphereIndex;
  return v;
}

/// Position of a catalog feature in the coordinates of `chart`; nullopt for
/// the point at infinity of that chart.
inline std::optional<Vec2> in_chart(Vec2 p, Chart from, Chart chart) {
  if (from == chart) return p;
  if (p.x == 0.0 && p.y == 0.0) return std::nullopt;
  return detail::invert(p);
}

struct EnclosureIssue {
  std::size_t ring;  // index into SphereCatalog::rings
  std::string message;
};

/// Each creation ring's immediately enclosed zero should be a sink and each
/// annihilation ring's a source. Returns the violations.
inline std::vector<EnclosureIssue> check_enclosures(const SphereCatalog& cat) {
  std::vector<EnclosureIssue> issues;
  for (std::size_t i = 0; i < cat.rings.size(); ++i) {
    const CatalogRing& r = cat.rings[i];
    if (!r.result.report) continue;
    const RingClass kind = r.result.report->classification.kind;
    if (kind == RingClass::Collapsible) continue;
    for (const CatalogZero& z : cat.zeros) {
      const auto p = in_chart(z.eq.position, z.chart, r.chart);
      if (!p || !r.result.ring.encloses(*p)) continue;
      // immediately enclosed: no other ring of the same chart between
      bool nested = false;
      for (std::size_t j = 0; j < cat.rings.size(); ++j) {
        const CatalogRing& o = cat.rings[j];
        if (j == i) continue;
        const auto c = in_chart(o.result.ring.vertices.front(), o.chart, r.chart);
        if (o.chart == r.chart && c && r.result.ring.encloses(*c) && o.result.ring.encloses(*p)) nested = true;
      }
      if (nested) continue;
      const ZeroKind want = kind == RingClass::Creation ? ZeroKind::Sink : ZeroKind::Source;
      if (z.eq.kind != want)
        issues.push_back({i, std::string(to_string(r.result.report->classification)) + " ring encloses a " +
                                 to_string(z.eq.kind) + " instead of a " + to_string(want)});
    }
  }
  return issues;
}

}  // namespace degen
