#pragma once

// Trajectories of ẋ = JE(x)/f(x) by an adaptive Dormand–Prince 5(4) pair,
// stopped when they reach the degeneracy set.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "degen/error.hpp"
#include "degen/field.hpp"
#include "degen/levelset.hpp"

namespace degen {

enum class Termination { TimeLimit, RingHit, Blowup, ZeroReached };

constexpr const char* to_string(Termination t) {
  switch (t) {
    case Termination::TimeLimit: return "TimeLimit";
    case Termination::RingHit: return "RingHit";
    case Termination::Blowup: return "Blowup";
    case Termination::ZeroReached: return "ZeroReached";
  }
  return "?";
}

struct Trajectory {
  std::vector<double> t;
  std::vector<Vec2> x;
  Termination termination = Termination::TimeLimit;
  std::optional<std::size_t> ring_id;  // index into the rings passed to integrate
  std::optional<Vec2> hit_point;
};

struct FlowOptions {
  double eps_ring = 1e-6;
  double blowup_radius = 1e6;
  double zero_speed = 1e-12;
  double min_step = 1e-14;
  double max_step = std::numeric_limits<double>::infinity();
  std::size_t max_steps = 1000000;
};

namespace detail {

struct DormandPrince {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  // b - b* (fifth minus fourth order weights)
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
};

}  // namespace detail

/// Integrates from x0 up to t_max with absolute and relative tolerance tol.
/// A trial step whose stages leave the side of the degeneracy set on which
/// it started is rejected and halved. RingHit is reported once |f| drops
/// below eps_ring; if the step underflows while the crossing is imminent,
/// the arrival time is extrapolated from d(f²)/dt = 2⟨JE,∇f⟩, which stays
/// finite at the ring.
inline Trajectory integrate(const ScalarField& f, const VectorField& e, Vec2 x0, double t_max,
                            double tol, const std::vector<Ring>& rings = {},
                            const FlowOptions& opt = {}) {
  if (!(tol > 0.0)) throw Error(ErrorCode::ConfigError, "tolerance must be positive");
  if (!(t_max > 0.0)) throw Error(ErrorCode::ConfigError, "t_max must be positive");
  const double f0 = f(x0);
  if (std::abs(f0) <= opt.eps_ring)
    throw Error(ErrorCode::StartsOnRing, "|f(x0)| = " + std::to_string(std::abs(f0)));
  const bool positive = f0 > 0.0;

  using DP = detail::DormandPrince;
  Trajectory tr;
  double t = 0.0;
  Vec2 x = x0;
  tr.t.push_back(t);
  tr.x.push_back(x);

  // velocity, or nullopt when p is not strictly on the starting side
  auto velocity = [&](Vec2 p) -> std::optional<Vec2> {
    const double fp = f(p);
    if ((fp > 0.0) != positive || std::abs(fp) <= 0.5 * opt.eps_ring) return std::nullopt;
    return (1.0 / fp) * e.rotated(p);
  };
  auto nearest_ring = [&](Vec2 p) -> std::optional<std::size_t> {
    if (rings.empty()) return std::nullopt;
    std::size_t best = 0;
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < rings.size(); ++i) {
      const double di = rings[i].distance_to(p);
      if (di < d) {
        d = di;
        best = i;
      }
    }
    return best;
  };
  auto project = [&](Vec2 p) {
    for (int k = 0; k < 20; ++k) {
      const Vec2 g = f.grad(p);
      const double g2 = dot(g, g);
      if (g2 == 0.0) break;
      const Vec2 step = (f(p) / g2) * g;
      p -= step;
      if (norm(step) < 1e-15) break;
    }
    return p;
  };
  auto finish_ring = [&](double t_hit, Vec2 p) {
    const Vec2 hit = project(p);
    if (t_hit > tr.t.back()) {
      tr.t.push_back(t_hit);
      tr.x.push_back(hit);
    }
    tr.termination = Termination::RingHit;
    tr.hit_point = hit;
    tr.ring_id = nearest_ring(hit);
    return tr;
  };

  std::optional<Vec2> k1 = velocity(x);
  const double speed0 = norm(*k1);
  if (speed0 < opt.zero_speed) {
    tr.termination = Termination::ZeroReached;
    return tr;
  }
  double h = std::min({opt.max_step, t_max, 0.01 * std::max(1.0, norm(x)) / speed0});

  for (std::size_t step = 0; step < opt.max_steps; ++step) {
    if (t >= t_max) {
      tr.termination = Termination::TimeLimit;
      return tr;
    }
    h = std::min({h, t_max - t, opt.max_step});
    bool crossed = false;
    Vec2 xn{}, err{};
    std::optional<Vec2> k7;
    {
      const Vec2 a = *k1;
      auto k2 = velocity(x + h * (DP::a21 * a));
      auto k3 = k2 ? velocity(x + h * (DP::a31 * a + DP::a32 * *k2)) : std::nullopt;
      auto k4 = k3 ? velocity(x + h * (DP::a41 * a + DP::a42 * *k2 + DP::a43 * *k3)) : std::nullopt;
      auto k5 = k4 ? velocity(x + h * (DP::a51 * a + DP::a52 * *k2 + DP::a53 * *k3 + DP::a54 * *k4))
                   : std::nullopt;
      auto k6 = k5 ? velocity(x + h * (DP::a61 * a + DP::a62 * *k2 + DP::a63 * *k3 + DP::a64 * *k4 +
                                       DP::a65 * *k5))
                   : std::nullopt;
      if (!k6) {
        crossed = true;
      } else {
        xn = x + h * (DP::b1 * a + DP::b3 * *k3 + DP::b4 * *k4 + DP::b5 * *k5 + DP::b6 * *k6);
        k7 = velocity(xn);
        if (!k7) {
          crossed = true;
        } else {
          err = h * (DP::e1 * a + DP::e3 * *k3 + DP::e4 * *k4 + DP::e5 * *k5 + DP::e6 * *k6 +
                     DP::e7 * *k7);
        }
      }
    }

    if (crossed) {
      if (0.5 * h < opt.min_step) {
        // f² is smooth in t near the ring: d(f²)/dt = 2g
        const double fx = f(x), g = tangency_function(f, e, x);
        if (g < 0.0) {
          const double tau = fx * fx / (2.0 * std::abs(g));
          return finish_ring(t + tau, x);
        }
        throw Error(ErrorCode::StepUnderflow, "step below " + std::to_string(opt.min_step) +
                                                  " at t = " + std::to_string(t));
      }
      h *= 0.5;
      continue;
    }

    const double sx = tol + tol * std::max(std::abs(x.x), std::abs(xn.x));
    const double sy = tol + tol * std::max(std::abs(x.y), std::abs(xn.y));
    const double en = std::sqrt(0.5 * ((err.x / sx) * (err.x / sx) + (err.y / sy) * (err.y / sy)));
    if (!(en <= 1.0)) {
      const double shrink = std::isfinite(en) ? std::max(0.2, 0.9 * std::pow(en, -0.2)) : 0.2;
      if (h * shrink < opt.min_step)
        throw Error(ErrorCode::StepUnderflow, "step below " + std::to_string(opt.min_step) +
                                                  " at t = " + std::to_string(t));
      h *= shrink;
      continue;
    }

    t += h;
    x = xn;
    k1 = k7;
    tr.t.push_back(t);
    tr.x.push_back(x);
    if (std::abs(f(x)) < opt.eps_ring) return finish_ring(t, x);
    if (norm(x) > opt.blowup_radius) {
      tr.termination = Termination::Blowup;
      return tr;
    }
    if (norm(*k1) < opt.zero_speed) {
      tr.termination = Termination::ZeroReached;
      return tr;
    }
    const double grow = en == 0.0 ? 5.0 : std::min(5.0, std::max(0.2, 0.9 * std::pow(en, -0.2)));
    h *= grow;
  }
  throw Error(ErrorCode::StepUnderflow, "step budget exhausted at t = " + std::to_string(t));
}

}  // namespace degen
