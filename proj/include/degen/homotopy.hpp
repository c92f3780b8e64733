#pragma once

// Admissibility of a one-parameter family (f_s, E_s): the tangency count of
// every ring must stay constant while s varies.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "degen/error.hpp"
#include "degen/field.hpp"
#include "degen/levelset.hpp"
#include "degen/ring_index.hpp"

namespace degen {

struct RingSample {
  Vec2 centroid;
  int m = 0;
  int rind = 0;
  int winding = 0;
  std::size_t track = 0;
};

struct SampleError {
  ErrorCode code;
  std::string message;
};

struct HomotopySample {
  double s = 0.0;
  std::vector<RingSample> rings;
  std::optional<SampleError> error;
};

struct RingTrack {
  std::vector<std::size_t> samples;  // indices into AdmissibilityReport::samples
  bool m_constant = true;
  bool rind_constant = true;
};

struct AdmissibilityReport {
  std::vector<HomotopySample> samples;
  std::vector<RingTrack> tracks;
  bool admissible = true;     // no failed sample and m constant on every track
  bool rind_constant = true;  // rind constant on every track
};

struct HomotopyOptions {
  double s_min = 0.0;
  double s_max = 1.0;
  std::size_t n_samples = 21;
  LevelSetOptions level_set;
  RingIndexOptions ring_index;
};

namespace detail {

inline double min_centroid_separation(const std::vector<RingSample>& rings) {
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < rings.size(); ++i)
    for (std::size_t j = i + 1; j < rings.size(); ++j)
      d = std::min(d, distance(rings[i].centroid, rings[j].centroid));
  return d;
}

}  // namespace detail

/// Samples s uniformly on [s_min, s_max]. Per-sample failures (level-set or
/// tangency errors) are recorded on the sample, tagged with s, and make the
/// family non-admissible; a change in ring count between two nonzero counts
/// throws RingBifurcation.
inline AdmissibilityReport check_homotopy(const ScalarField& f_family, const VectorField& e_family,
                                          const Domain& dom, const HomotopyOptions& opt = {}) {
  dom.validate();
  if (opt.n_samples < 2) throw Error(ErrorCode::ConfigError, "homotopy needs at least 2 samples");
  if (!(opt.s_min < opt.s_max)) throw Error(ErrorCode::ConfigError, "s_min must be < s_max");

  AdmissibilityReport report;
  for (std::size_t k = 0; k < opt.n_samples; ++k) {
    HomotopySample sample;
    sample.s = opt.s_min + (opt.s_max - opt.s_min) * static_cast<double>(k) /
                               static_cast<double>(opt.n_samples - 1);
    try {
      const ScalarField f = f_family.bind_parameter(sample.s);
      const VectorField e = e_family.bind_parameter(sample.s);
      const LevelSet ls = extract_level_set(f, dom, opt.level_set);
      for (const Ring& ring : ls.rings) {
        const RingReport r = analyze_ring(f, e, ring, opt.ring_index);
        sample.rings.push_back({ring.centroid(), r.m, r.rind, r.winding, 0});
      }
    } catch (const Error& err) {
      sample.error = SampleError{err.code(), "at s = " + std::to_string(sample.s) + ": " + err.what()};
      sample.rings.clear();
      report.admissible = false;
    }
    report.samples.push_back(std::move(sample));
  }

  // Link rings of consecutive successful samples into tracks.
  const HomotopySample* prev = nullptr;
  for (std::size_t k = 0; k < report.samples.size(); ++k) {
    HomotopySample& cur = report.samples[k];
    if (cur.error) continue;  // tracks bridge failed samples
    const bool continues = prev && !prev->rings.empty() && !cur.rings.empty();
    if (continues && prev->rings.size() != cur.rings.size())
      throw Error(ErrorCode::RingBifurcation,
                  "ring count changes from " + std::to_string(prev->rings.size()) + " to " +
                      std::to_string(cur.rings.size()) + " at s = " + std::to_string(cur.s));
    if (continues) {
      const double threshold = 0.5 * std::min(detail::min_centroid_separation(prev->rings),
                                              detail::min_centroid_separation(cur.rings));
      std::vector<bool> used(prev->rings.size(), false);
      for (RingSample& r : cur.rings) {
        std::size_t best = prev->rings.size();
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < prev->rings.size(); ++j) {
          const double d = distance(r.centroid, prev->rings[j].centroid);
          if (!used[j] && d < best_d) {
            best_d = d;
            best = j;
          }
        }
        if (best == prev->rings.size() || !(best_d < threshold))
          throw Error(ErrorCode::RingBifurcation,
                      "ring cannot be matched by continuity at s = " + std::to_string(cur.s));
        used[best] = true;
        r.track = prev->rings[best].track;
      }
    } else {
      for (RingSample& r : cur.rings) {
        r.track = report.tracks.size();
        report.tracks.emplace_back();
      }
    }
    for (const RingSample& r : cur.rings) {
      RingTrack& t = report.tracks[r.track];
      if (!t.samples.empty()) {
        const HomotopySample& first = report.samples[t.samples.front()];
        const auto it = std::find_if(first.rings.begin(), first.rings.end(),
                                     [&](const RingSample& q) { return q.track == r.track; });
        t.m_constant = t.m_constant && it->m == r.m;
        t.rind_constant = t.rind_constant && it->rind == r.rind;
      }
      t.samples.push_back(k);
    }
    prev = &cur;
  }
  for (const RingTrack& t : report.tracks) {
    report.admissible = report.admissible && t.m_constant;
    report.rind_constant = report.rind_constant && t.rind_constant;
  }
  return report;
}

}  // namespace degen
