#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace degen {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
  constexpr Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
  constexpr Vec2& operator*=(double c) { x *= c; y *= c; return *this; }

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
  friend constexpr Vec2 operator*(double c, Vec2 a) { return {c * a.x, c * a.y}; }
  friend constexpr Vec2 operator*(Vec2 a, double c) { return {c * a.x, c * a.y}; }
  friend constexpr Vec2 operator/(Vec2 a, double c) { return {a.x / c, a.y / c}; }
  friend constexpr bool operator==(Vec2, Vec2) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

/// The fixed quarter turn ((0,-1),(1,0)).
constexpr Vec2 rotate_quarter(Vec2 a) { return {-a.y, a.x}; }

inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }

/// Distance from p to the segment [a, b].
inline double segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 d = b - a;
  const double len2 = dot(d, d);
  if (len2 == 0.0) return distance(p, a);
  double t = dot(p - a, d) / len2;
  t = t < 0.0 ? 0.0 : (t > 1.0 ? 1.0 : t);
  return distance(p, a + t * d);
}

namespace detail {

/// "(x, y)" with 6 significant digits; values below 5e-7 print as 0.
inline std::string point_str(Vec2 p) {
  auto one = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", std::abs(v) < 5e-7 ? 0.0 : v);
    return std::string(buf);
  };
  return "(" + one(p.x) + ", " + one(p.y) + ")";
}

}  // namespace detail

}  // namespace degen
