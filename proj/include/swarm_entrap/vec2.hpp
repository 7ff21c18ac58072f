#pragma once

#include <cmath>
#include <numbers>

namespace swarm_entrap {

/// Planar vector in meters (positions) or meters per step (velocities).
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2& operator+=(Vec2 o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr Vec2& operator-=(Vec2 o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  constexpr Vec2& operator*=(double s) {
    x *= s;
    y *= s;
    return *this;
  }

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.y * s}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {a.x * s, a.y * s}; }
  friend constexpr Vec2 operator/(Vec2 a, double s) { return {a.x / s, a.y / s}; }
  friend constexpr bool operator==(Vec2 a, Vec2 b) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
constexpr double norm_sq(Vec2 v) { return dot(v, v); }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }
inline bool is_finite(Vec2 v) { return std::isfinite(v.x) && std::isfinite(v.y); }

/// Unit vector along v; the zero vector when |v| <= eps.
inline Vec2 unit(Vec2 v, double eps = 1e-12) {
  const double n = norm(v);
  if (n <= eps) return {};
  return v / n;
}

inline Vec2 rotate(Vec2 v, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

inline Vec2 from_heading(double heading) { return {std::cos(heading), std::sin(heading)}; }

/// Angle of v mapped into [0, 2*pi).
inline double heading_of(Vec2 v) {
  double a = std::atan2(v.y, v.x);
  if (a < 0.0) a += 2.0 * std::numbers::pi;
  if (a >= 2.0 * std::numbers::pi) a = 0.0;
  return a;
}

}  // namespace swarm_entrap
