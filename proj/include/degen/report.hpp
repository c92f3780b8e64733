#pragma once

// Command orchestration: builds the JSON reports and exit codes of the CLI
// subcommands from a Config.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "degen/analysis.hpp"
#include "degen/config.hpp"
#include "degen/deg_index.hpp"
#include "degen/flow.hpp"
#include "degen/homotopy.hpp"
#include "degen/portrait.hpp"
#include "degen/sphere.hpp"

namespace degen {

using Json = nlohmann::ordered_json;

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitAnalysis = 2, kExitPhFails = 3 };

struct CommandOutcome {
  Json report;
  int exit_code = kExitOk;
};

namespace detail {

/// 12 significant digits; -0 becomes 0; non-finite values become null.
inline Json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  const double r = std::strtod(buf, nullptr);
  return r == 0.0 ? 0.0 : r;
}

inline Json point(Vec2 p) { return Json::array({num(p.x), num(p.y)}); }

inline Json error_json(ErrorCode code, const std::string& message) {
  Json j;
  j["code"] = std::string(to_string(code));
  j["message"] = message;
  return j;
}

inline CommandOutcome failure(const Error& err) {
  CommandOutcome out;
  out.report["error"] = error_json(err.code(), err.what());
  out.exit_code = kExitAnalysis;
  return out;
}

struct PlaneSystem {
  ScalarField f;
  VectorField e;
};

/// The system analyzed in the plane: [fields], or the north chart.
inline PlaneSystem plane_system(const Config& c) {
  const FieldText& t = c.fields ? *c.fields : *c.north;
  return {ScalarField::parse(t.f), VectorField::parse(t.e1, t.e2)};
}

inline void require_fixed(const Config& c, const char* command) {
  if (c.family)
    throw Error(ErrorCode::ConfigError, std::string(command) + " needs a fixed system; family = true is for homotopy");
  for (const auto* t : {&c.fields, &c.north, &c.south})
    if (*t && (Expr::parse((*t)->f).uses_parameter() || Expr::parse((*t)->e1).uses_parameter() ||
               Expr::parse((*t)->e2).uses_parameter()))
      throw Error(ErrorCode::ConfigError, "expressions use s but the config does not declare family = true");
}

inline SphereFlow sphere_flow(const Config& c) {
  if (c.explicit_charts())
    return {{ScalarField::parse(c.north->f), VectorField::parse(c.north->e1, c.north->e2)},
            {ScalarField::parse(c.south->f), VectorField::parse(c.south->e1, c.south->e2)},
            1.0};
  const PlaneSystem p = plane_system(c);
  return compactify(p.f, p.e);
}

inline Json ring_json(const RingResult& r, const char* chart = nullptr) {
  Json j;
  if (chart) j["chart"] = chart;
  j["vertex_count"] = r.ring.size();
  j["arc_length"] = num(r.ring.arc_length);
  if (r.report) {
    const RingReport& rep = *r.report;
    j["m"] = rep.m;
    j["rind"] = rep.rind;
    j["winding"] = rep.winding;
    j["classification"] = to_string(rep.classification);
    Json pts = Json::array();
    const std::vector<double> cum = r.ring.cumulative_length();
    for (double s : rep.tangency_points) pts.push_back(point(r.ring.point_at(s, cum)));
    j["tangency_points"] = pts;
  } else if (r.error) {
    j["error"] = error_json(r.error->code, r.error->message);
  }
  return j;
}

inline Json zero_json(const Equilibrium& z, const char* chart = nullptr) {
  Json j;
  if (chart) j["chart"] = chart;
  j["position"] = point(z.position);
  j["poincare_index"] = z.poincare_index;
  j["kind"] = to_string(z.kind);
  return j;
}

inline Json curve_json(const OpenCurve& c, const char* chart = nullptr) {
  Json j;
  if (chart) j["chart"] = chart;
  j["vertex_count"] = c.vertices.size();
  j["ends"] = Json::array({point(c.vertices.front()), point(c.vertices.back())});
  return j;
}

inline Json warning_json(const Diagnostic& d, const char* chart = nullptr) {
  Json j;
  if (chart) j["chart"] = chart;
  j["code"] = std::string(to_string(d.code));
  j["message"] = d.message;
  return j;
}

}  // namespace detail

/// Rings, open curves, zeros and warnings of one chart, or of the merged
/// sphere catalog in sphere mode. Exit 2 when any feature failed.
inline CommandOutcome analyze_report(const Config& c) {
  detail::require_fixed(c, "analyze");
  CommandOutcome out;
  Json& r = out.report;
  try {
    if (c.mode == Mode::Plane) {
      const detail::PlaneSystem p = detail::plane_system(c);
      const ChartAnalysis a = analyze_chart(p.f, p.e, c.domain, c.analysis);
      r["rings"] = Json::array();
      for (const RingResult& ring : a.rings) r["rings"].push_back(detail::ring_json(ring));
      r["open_curves"] = Json::array();
      for (const OpenCurve& oc : a.open_curves) r["open_curves"].push_back(detail::curve_json(oc));
      r["zeros"] = Json::array();
      for (const Equilibrium& z : a.zeros) r["zeros"].push_back(detail::zero_json(z));
      r["warnings"] = Json::array();
      for (const Diagnostic& d : a.diagnostics) r["warnings"].push_back(detail::warning_json(d));
      r["complete"] = a.complete;
      if (!a.complete) out.exit_code = kExitAnalysis;
    } else {
      const SphereFlow sf = detail::sphere_flow(c);
      const SphereCatalog cat = analyze_sphere(sf, c.domain, c.analysis);
      r["rings"] = Json::array();
      for (const CatalogRing& ring : cat.rings)
        r["rings"].push_back(detail::ring_json(ring.result, to_string(ring.chart)));
      // open curves that no ring of the other chart closes appear as IncompleteCatalog warnings
      r["open_curves"] = Json::array();
      r["zeros"] = Json::array();
      for (const CatalogZero& z : cat.zeros) r["zeros"].push_back(detail::zero_json(z.eq, to_string(z.chart)));
      r["warnings"] = Json::array();
      for (const ChartDiagnostic& d : cat.diagnostics)
        r["warnings"].push_back(detail::warning_json(d.diagnostic, to_string(d.chart)));
      r["complete"] = cat.complete;
      if (!cat.complete) out.exit_code = kExitAnalysis;
    }
  } catch (const Error& err) {
    return detail::failure(err);
  }
  return out;
}

/// Index sum over the sphere catalog: exit 0 if it equals 2(S1)-1(Z1),
/// 3 if not, 2 when the catalog cannot be built or summed.
inline CommandOutcome ph_check_report(const Config& c) {
  detail::require_fixed(c, "ph-check");
  if (c.mode != Mode::Sphere) throw Error(ErrorCode::ConfigError, "ph-check needs mode = sphere");
  CommandOutcome out;
  try {
    const SphereCatalog cat = analyze_sphere(detail::sphere_flow(c), c.domain, c.analysis);
    const PoincareHopfVerdict v = check_poincare_hopf(cat);
    out.report["sum"] = v.sum.str();
    out.report["holds"] = v.holds;
    std::vector<std::string> warnings = v.warnings;
    const Domain& d = c.domain;
    if (d.xmin > -1.0 || d.xmax < 1.0 || d.ymin > -1.0 || d.ymax < 1.0)
      warnings.push_back("domain does not cover the closed unit disc; the charts miss part of the sphere");
    for (const EnclosureIssue& issue : check_enclosures(cat)) warnings.push_back(issue.message);
    if (!warnings.empty()) out.report["warnings"] = warnings;
    out.exit_code = v.holds ? kExitOk : kExitPhFails;
  } catch (const Error& err) {
    return detail::failure(err);
  }
  return out;
}

/// Per-sample ring table of an s-family, with the admissibility and
/// rind-constancy flags.
inline CommandOutcome homotopy_report(const Config& c, std::size_t n_samples) {
  if (!c.family || !c.fields)
    throw Error(ErrorCode::ConfigError, "homotopy needs [fields] with family = true");
  CommandOutcome out;
  try {
    const detail::PlaneSystem p = detail::plane_system(c);
    HomotopyOptions opt;
    opt.s_min = c.s_min;
    opt.s_max = c.s_max;
    opt.n_samples = n_samples;
    opt.level_set = c.analysis.level_set;
    opt.ring_index = c.analysis.ring_index;
    const AdmissibilityReport rep = check_homotopy(p.f, p.e, c.domain, opt);
    Json samples = Json::array();
    for (const HomotopySample& s : rep.samples) {
      Json j;
      j["s"] = detail::num(s.s);
      j["ring_count"] = s.rings.size();
      Json m = Json::array(), rind = Json::array();
      for (const RingSample& r : s.rings) {
        m.push_back(r.m);
        rind.push_back(r.rind);
      }
      j["m"] = m;
      j["rind"] = rind;
      if (s.error) j["error"] = detail::error_json(s.error->code, s.error->message);
      samples.push_back(j);
    }
    out.report["samples"] = samples;
    out.report["admissible"] = rep.admissible;
    out.report["rind_constant"] = rep.rind_constant;
  } catch (const Error& err) {
    if (err.code() == ErrorCode::ConfigError) throw;
    return detail::failure(err);
  }
  return out;
}

/// Trajectory of the plane system from x0. Rings of the domain are used to
/// name the ring that is hit; if they cannot be extracted the trajectory is
/// still reported, with a warning.
inline CommandOutcome integrate_report(const Config& c, Vec2 x0, double t_max, double tol) {
  detail::require_fixed(c, "integrate");
  CommandOutcome out;
  try {
    const detail::PlaneSystem p = detail::plane_system(c);
    Json warnings = Json::array();
    std::vector<Ring> rings;
    try {
      rings = extract_level_set(p.f, c.domain, c.analysis.level_set).rings;
    } catch (const Error& err) {
      warnings.push_back(detail::error_json(err.code(), err.what()));
    }
    const Trajectory tr = integrate(p.f, p.e, x0, t_max, tol, rings);
    Json& r = out.report;
    r["termination"] = to_string(tr.termination);
    r["ring_id"] = tr.ring_id ? Json(*tr.ring_id) : Json(nullptr);
    r["hit_point"] = tr.hit_point ? detail::point(*tr.hit_point) : Json(nullptr);
    r["t_end"] = detail::num(tr.t.back());
    Json t = Json::array(), x = Json::array();
    for (std::size_t i = 0; i < tr.t.size(); ++i) {
      t.push_back(detail::num(tr.t[i]));
      x.push_back(detail::point(tr.x[i]));
    }
    r["t"] = t;
    r["x"] = x;
    r["warnings"] = warnings;
  } catch (const Error& err) {
    if (err.code() == ErrorCode::ConfigError) throw;
    return detail::failure(err);
  }
  return out;
}

struct PortraitOutcome {
  std::optional<std::string> svg;
  CommandOutcome outcome;  // report holds the error when svg is empty
};

/// Portrait of the plane system (north chart in sphere mode). A fatal
/// analysis error yields no SVG and exit 2.
inline PortraitOutcome portrait_report(const Config& c, const PortraitOptions& opt = {}) {
  detail::require_fixed(c, "portrait");
  PortraitOutcome out;
  try {
    const detail::PlaneSystem p = detail::plane_system(c);
    out.svg = phase_portrait_svg(p.f, p.e, c.domain, opt, c.analysis);
  } catch (const Error& err) {
    out.outcome = detail::failure(err);
  }
  return out;
}

}  // namespace degen
