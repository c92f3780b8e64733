#pragma once

// Full analysis of one planar chart: level set, ring reports, equilibria.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "degen/equilibria.hpp"
#include "degen/levelset.hpp"
#include "degen/ring_index.hpp"

namespace degen {

struct AnalysisOptions {
  LevelSetOptions level_set;
  RingIndexOptions ring_index;
  ZeroSearchOptions zeros;
  double zero_clearance = 1e-4;  // minimum |f|/|∇f| at an accepted zero
};

struct RingResult {
  Ring ring;
  std::optional<RingReport> report;
  std::optional<Diagnostic> error;
};

struct ChartAnalysis {
  std::vector<RingResult> rings;
  std::vector<OpenCurve> open_curves;
  std::vector<Equilibrium> zeros;
  std::vector<Diagnostic> diagnostics;  // non-fatal errors and warnings
  bool complete = true;                 // every ring and zero was analyzed
};

/// Level-set errors are fatal and propagate; ring and zero failures are
/// recorded and clear `complete`.
inline ChartAnalysis analyze_chart(const ScalarField& f, const VectorField& e, const Domain& dom,
                                   const AnalysisOptions& opt = {}) {
  ChartAnalysis out;
  const LevelSet ls = extract_level_set(f, dom, opt.level_set);
  out.open_curves = ls.open_curves;

  std::vector<Ring> rings;
  for (const Ring& ring : ls.rings) {
    RingResult rr{ring, std::nullopt, std::nullopt};
    try {
      rr.report = analyze_ring(f, e, ring, opt.ring_index);
    } catch (const Error& err) {
      rr.error = Diagnostic{err.code(), err.what()};
      out.complete = false;
    }
    rings.push_back(ring);
    out.rings.push_back(std::move(rr));
  }

  std::vector<Diagnostic> zero_diag;
  const std::vector<Vec2> zs = find_zeros(e, dom, rings, &zero_diag, opt.zeros);
  for (const Diagnostic& d : zero_diag) {
    if (d.code == ErrorCode::ZeroOnRing) out.complete = false;
    out.diagnostics.push_back(d);
  }

  for (std::size_t k = 0; k < zs.size(); ++k) {
    const Vec2 z = zs[k];
    const double fz = f(z);
    const double gz = norm(f.grad(z));
    if (std::abs(fz) < opt.zero_clearance * gz || fz == 0.0) {
      out.diagnostics.push_back(
          {ErrorCode::ZeroOnRing, "zero at " + detail::point_str(z) + " lies on the degeneracy set"});
      out.complete = false;
      continue;
    }
    // circle radius: well inside the gap to other zeros and rings
    double gap = 0.05 * dom.diagonal();
    for (std::size_t j = 0; j < zs.size(); ++j)
      if (j != k) gap = std::min(gap, 0.25 * distance(z, zs[j]));
    for (const Ring& r : rings) gap = std::min(gap, 0.5 * r.distance_to(z));
    for (const OpenCurve& c : ls.open_curves) gap = std::min(gap, 0.5 * c.distance_to(z));

    Equilibrium eq;
    eq.position = z;
    eq.f_value = fz;
    try {
      eq.poincare_index = poincare_index(e, z, gap);
    } catch (const Error& err) {
      out.diagnostics.push_back({err.code(), err.what()});
      out.complete = false;
      continue;
    }
    try {
      eq.kind = classify_zero(f, e, z);
    } catch (const Error& err) {
      if (err.code() != ErrorCode::MarginalLinearization) throw;
      eq.kind = ZeroKind::Other;
      out.diagnostics.push_back({err.code(), err.what()});
    }
    out.zeros.push_back(eq);
  }
  return out;
}

}  // namespace degen
