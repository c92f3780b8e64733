#pragma once

// Deterministic SVG phase portraits of f·ẋ = JE.

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "degen/analysis.hpp"
#include "degen/deg_index.hpp"

namespace degen {

struct PortraitOptions {
  int width = 800;
  int height = 800;
  int seeds_per_axis = 16;
  int max_streamline_steps = 160;
  std::string color_positive = "#1f77b4";  // f > 0
  std::string color_negative = "#d62728";  // f < 0
  std::string color_ring = "#000000";
  double streamline_width = 1.0;
  double ring_width = 3.0;
};

namespace detail {

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v == 0.0 ? 0.0 : v);
  return buf;
}

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

class SvgCanvas {
 public:
  SvgCanvas(const Domain& dom, const PortraitOptions& opt) : dom_(dom), opt_(opt) {}

  double px(double x) const { return (x - dom_.xmin) / (dom_.xmax - dom_.xmin) * opt_.width; }
  double py(double y) const { return (dom_.ymax - y) / (dom_.ymax - dom_.ymin) * opt_.height; }

  std::string points(const std::vector<Vec2>& pts, bool close) const {
    std::string d;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      d += (i == 0 ? "M" : " L") + fmt(px(pts[i].x)) + "," + fmt(py(pts[i].y));
    }
    if (close) d += " Z";
    return d;
  }

 private:
  Domain dom_;
  PortraitOptions opt_;
};

// Streamline along the direction of JE/f, stopped at the domain boundary,
// at zeros of E and where f changes sign.
inline std::vector<Vec2> streamline(const ScalarField& f, const VectorField& e, Vec2 seed,
                                    const Domain& dom, const PortraitOptions& opt) {
  const double ds = dom.diagonal() / 400.0;
  const bool positive = f(seed) > 0.0;
  auto dir = [&](Vec2 p, bool& ok) -> Vec2 {
    ok = false;
    const double fp = f(p);
    if (fp == 0.0 || (fp > 0.0) != positive) return {};
    const Vec2 v = e.rotated(p);
    const double n = norm(v);
    if (!(n > 1e-12)) return {};
    ok = true;
    return (positive ? 1.0 : -1.0) / n * v;
  };
  std::vector<Vec2> pts{seed};
  Vec2 p = seed;
  for (int k = 0; k < opt.max_streamline_steps; ++k) {
    bool o1, o2, o3, o4;
    const Vec2 k1 = dir(p, o1);
    const Vec2 k2 = dir(p + 0.5 * ds * k1, o2);
    const Vec2 k3 = dir(p + 0.5 * ds * k2, o3);
    const Vec2 k4 = dir(p + ds * k3, o4);
    if (!(o1 && o2 && o3 && o4)) break;
    p += ds / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!dom.contains(p)) break;
    pts.push_back(p);
  }
  return pts;
}

}  // namespace detail

/// Renders a precomputed chart analysis. Failed rings and non-fatal
/// diagnostics are listed in a banner at the top.
inline std::string phase_portrait_svg(const ScalarField& f, const VectorField& e, const Domain& dom,
                                      const ChartAnalysis& an, const PortraitOptions& opt = {}) {
  using detail::fmt;
  const detail::SvgCanvas cv(dom, opt);
  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + std::to_string(opt.width) +
       "\" height=\"" + std::to_string(opt.height) + "\" viewBox=\"0 0 " + std::to_string(opt.width) + " " +
       std::to_string(opt.height) + "\">\n";
  s += "<defs>\n";
  for (const auto& [id, color] : {std::pair{"pos", opt.color_positive}, std::pair{"neg", opt.color_negative}})
    s += "<marker id=\"arrow-" + std::string(id) +
         "\" viewBox=\"0 0 10 10\" refX=\"5\" refY=\"5\" markerWidth=\"6\" markerHeight=\"6\" "
         "orient=\"auto\"><path d=\"M0,0 L10,5 L0,10 z\" fill=\"" + color + "\"/></marker>\n";
  s += "</defs>\n";
  s += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(opt.width) + "\" height=\"" +
       std::to_string(opt.height) + "\" fill=\"#ffffff\"/>\n";

  // streamlines
  s += "<g id=\"streamlines\" fill=\"none\" stroke-width=\"" + fmt(opt.streamline_width) + "\">\n";
  const int n = opt.seeds_per_axis;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const Vec2 seed{dom.xmin + (i + 0.5) * (dom.xmax - dom.xmin) / n,
                      dom.ymin + (j + 0.5) * (dom.ymax - dom.ymin) / n};
      double fs;
      try {
        fs = f(seed);
      } catch (const Error&) {
        continue;
      }
      if (fs == 0.0) continue;
      std::vector<Vec2> pts;
      try {
        pts = detail::streamline(f, e, seed, dom, opt);
      } catch (const Error&) {
        continue;
      }
      if (pts.size() < 2) continue;
      const bool pos = fs > 0.0;
      const std::size_t mid = pts.size() / 2;
      const std::vector<Vec2> head(pts.begin(), pts.begin() + static_cast<std::ptrdiff_t>(mid + 1));
      const std::vector<Vec2> tail(pts.begin() + static_cast<std::ptrdiff_t>(mid), pts.end());
      const std::string color = pos ? opt.color_positive : opt.color_negative;
      s += "<path d=\"" + cv.points(head, false) + "\" stroke=\"" + color + "\" marker-end=\"url(#arrow-" +
           (pos ? "pos" : "neg") + ")\"/>\n";
      if (tail.size() >= 2) s += "<path d=\"" + cv.points(tail, false) + "\" stroke=\"" + color + "\"/>\n";
    }
  s += "</g>\n";

  // degeneracy set
  s += "<g id=\"degeneracy\" fill=\"none\">\n";
  for (const OpenCurve& c : an.open_curves)
    s += "<path d=\"" + cv.points(c.vertices, false) + "\" stroke=\"" + opt.color_ring + "\" stroke-width=\"" +
         fmt(0.5 * opt.ring_width) + "\" stroke-dasharray=\"6,4\"/>\n";
  for (const RingResult& r : an.rings) {
    s += "<path d=\"" + cv.points(r.ring.vertices, true) + "\" stroke=\"" + opt.color_ring + "\" stroke-width=\"" +
         fmt(opt.ring_width) + "\"/>\n";
    Vec2 top = r.ring.vertices.front();
    for (const Vec2& v : r.ring.vertices)
      if (v.y > top.y || (v.y == top.y && v.x < top.x)) top = v;
    const std::string label =
        r.report ? "rind=" + std::to_string(r.report->rind) + " " + to_string(r.report->classification)
                 : std::string("ring error");
    s += "<text x=\"" + fmt(cv.px(top.x)) + "\" y=\"" + fmt(cv.py(top.y) - 6) +
         "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" fill=\"" + opt.color_ring +
         "\">" + detail::xml_escape(label) + "</text>\n";
  }
  s += "</g>\n";

  // zeros
  s += "<g id=\"zeros\" font-family=\"sans-serif\" font-size=\"12\">\n";
  for (const Equilibrium& z : an.zeros) {
    const std::string x = fmt(cv.px(z.position.x)), y = fmt(cv.py(z.position.y));
    std::string label;
    switch (z.kind) {
      case ZeroKind::Source:
        s += "<circle cx=\"" + x + "\" cy=\"" + y + "\" r=\"5\" fill=\"#ffffff\" stroke=\"#000000\" stroke-width=\"2\"/>\n";
        label = index_of_zero(z.kind).str();
        break;
      case ZeroKind::Sink:
        s += "<circle cx=\"" + x + "\" cy=\"" + y + "\" r=\"5\" fill=\"#000000\"/>\n";
        label = index_of_zero(z.kind).str();
        break;
      case ZeroKind::Other:
        s += "<path d=\"M" + fmt(cv.px(z.position.x) - 5) + "," + fmt(cv.py(z.position.y) - 5) + " l10,10 m0,-10 l-10,10\" stroke=\"#000000\" stroke-width=\"2\"/>\n";
        label = "index " + std::to_string(z.poincare_index) + ", no degeneracy index";
        break;
    }
    s += "<text x=\"" + fmt(cv.px(z.position.x) + 8) + "\" y=\"" + fmt(cv.py(z.position.y) - 8) + "\">" +
         detail::xml_escape(std::string(to_string(z.kind)) + " " + label) + "</text>\n";
  }
  s += "</g>\n";

  // legend
  const int lx = 10, ly = opt.height - 110;
  s += "<g id=\"legend\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s += "<rect x=\"" + std::to_string(lx) + "\" y=\"" + std::to_string(ly) +
       "\" width=\"170\" height=\"100\" fill=\"#ffffff\" fill-opacity=\"0.85\" stroke=\"#888888\"/>\n";
  auto row = [&](int k, const std::string& swatch, const std::string& text) {
    const int y = ly + 18 + 20 * k;
    s += swatch.empty() ? "" : swatch;
    s += "<text x=\"" + std::to_string(lx + 40) + "\" y=\"" + std::to_string(y + 4) + "\">" + text + "</text>\n";
  };
  auto line = [&](int k, const std::string& color, double w) {
    const int y = ly + 18 + 20 * k;
    return "<line x1=\"" + std::to_string(lx + 8) + "\" y1=\"" + std::to_string(y) + "\" x2=\"" +
           std::to_string(lx + 32) + "\" y2=\"" + std::to_string(y) + "\" stroke=\"" + color +
           "\" stroke-width=\"" + fmt(w) + "\"/>\n";
  };
  row(0, line(0, opt.color_positive, 2), "flow where f &gt; 0");
  row(1, line(1, opt.color_negative, 2), "flow where f &lt; 0");
  row(2, line(2, opt.color_ring, opt.ring_width), "degeneracy ring");
  row(3,
      "<circle cx=\"" + std::to_string(lx + 14) + "\" cy=\"" + std::to_string(ly + 78) +
          "\" r=\"5\" fill=\"#ffffff\" stroke=\"#000000\" stroke-width=\"2\"/><circle cx=\"" +
          std::to_string(lx + 28) + "\" cy=\"" + std::to_string(ly + 78) + "\" r=\"5\" fill=\"#000000\"/>\n",
      "source / sink");
  s += "</g>\n";

  // banner for partial failures
  std::vector<std::string> problems;
  for (const RingResult& r : an.rings)
    if (r.error) problems.push_back(std::string(to_string(r.error->code)) + ": " + r.error->message);
  for (const Diagnostic& d : an.diagnostics)
    problems.push_back(std::string(to_string(d.code)) + ": " + d.message);
  if (!problems.empty()) {
    s += "<g id=\"errors\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#b00000\">\n";
    s += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(opt.width) + "\" height=\"" +
         std::to_string(18 * problems.size() + 8) + "\" fill=\"#fff0f0\"/>\n";
    for (std::size_t k = 0; k < problems.size(); ++k)
      s += "<text x=\"8\" y=\"" + std::to_string(18 * (k + 1)) + "\">" + detail::xml_escape(problems[k]) +
           "</text>\n";
    s += "</g>\n";
  }
  s += "</svg>\n";
  return s;
}

inline std::string phase_portrait_svg(const ScalarField& f, const VectorField& e, const Domain& dom,
                                      const PortraitOptions& opt = {},
                                      const AnalysisOptions& analysis = {}) {
  return phase_portrait_svg(f, e, dom, analyze_chart(f, e, dom, analysis), opt);
}

}  // namespace degen
