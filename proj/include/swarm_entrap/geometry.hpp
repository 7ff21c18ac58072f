#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "swarm_entrap/errors.hpp"
#include "swarm_entrap/vec2.hpp"

namespace swarm_entrap {

/// Axis-aligned square arena with its lower-left corner at the origin.
struct Arena {
  double side = 250.0;

  bool contains(Vec2 p) const { return p.x > 0.0 && p.x < side && p.y > 0.0 && p.y < side; }

  friend bool operator==(const Arena&, const Arena&) = default;
};

struct Circle {
  Vec2 center;
  double radius = 1.0;

  friend bool operator==(const Circle&, const Circle&) = default;
};

/// Strictly convex polygon with counterclockwise vertices.
struct ConvexPolygon {
  std::vector<Vec2> vertices;

  friend bool operator==(const ConvexPolygon&, const ConvexPolygon&) = default;
};

using Obstacle = std::variant<Circle, ConvexPolygon>;

/// Closest point on a boundary together with the unit normal pointing from
/// that point into free space.
struct BoundaryPoint {
  Vec2 point;
  Vec2 inward_normal;
};

enum class Wall : int { left = 0, right = 1, bottom = 2, top = 3 };

namespace detail {

inline Vec2 closest_on_segment(Vec2 a, Vec2 b, Vec2 p) {
  const Vec2 ab = b - a;
  const double len_sq = norm_sq(ab);
  if (len_sq == 0.0) return a;
  const double t = std::clamp(dot(p - a, ab) / len_sq, 0.0, 1.0);
  return a + ab * t;
}

// Outward normal of the CCW edge a -> b.
inline Vec2 edge_outward_normal(Vec2 a, Vec2 b) { return unit(Vec2{b.y - a.y, a.x - b.x}); }

inline bool strictly_inside(const Circle& c, Vec2 p) { return distance(p, c.center) < c.radius; }

inline bool strictly_inside(const ConvexPolygon& poly, Vec2 p) {
  const auto& v = poly.vertices;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec2 a = v[i];
    const Vec2 b = v[(i + 1) % v.size()];
    if (cross(b - a, p - a) <= 0.0) return false;
  }
  return true;
}

}  // namespace detail

inline bool strictly_inside(const Obstacle& obstacle, Vec2 p) {
  return std::visit([&](const auto& shape) { return detail::strictly_inside(shape, p); }, obstacle);
}

inline bool inside_any(std::span<const Obstacle> obstacles, Vec2 p) {
  return std::any_of(obstacles.begin(), obstacles.end(),
                     [&](const Obstacle& o) { return strictly_inside(o, p); });
}

/// Throws ArgumentError when the shape is degenerate, non-convex or clockwise.
inline void validate(const Obstacle& obstacle) {
  if (const auto* c = std::get_if<Circle>(&obstacle)) {
    if (!is_finite(c->center) || !std::isfinite(c->radius) || c->radius <= 0.0)
      throw ArgumentError("circle radius must be positive and finite");
    return;
  }
  const auto& v = std::get<ConvexPolygon>(obstacle).vertices;
  if (v.size() < 3) throw ArgumentError("polygon needs at least 3 vertices");
  double turning = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!is_finite(v[i])) throw ArgumentError("polygon vertex is not finite");
    const Vec2 e0 = v[(i + 1) % v.size()] - v[i];
    const Vec2 e1 = v[(i + 2) % v.size()] - v[(i + 1) % v.size()];
    const double c = cross(e0, e1);
    if (!(c > 0.0)) throw ArgumentError("polygon must be strictly convex and counterclockwise");
    turning += std::atan2(c, dot(e0, e1));
  }
  if (std::abs(turning - 2.0 * std::numbers::pi) > 1e-6)
    throw ArgumentError("polygon winds more than once");
}

inline bool inside_arena(const Arena& arena, const Obstacle& obstacle) {
  if (const auto* c = std::get_if<Circle>(&obstacle)) {
    return c->center.x - c->radius > 0.0 && c->center.x + c->radius < arena.side &&
           c->center.y - c->radius > 0.0 && c->center.y + c->radius < arena.side;
  }
  const auto& v = std::get<ConvexPolygon>(obstacle).vertices;
  return std::all_of(v.begin(), v.end(), [&](Vec2 p) { return arena.contains(p); });
}

/// Nearest boundary point and outward normal for any p, including points
/// inside the obstacle.
inline BoundaryPoint project_to_boundary(const Obstacle& obstacle, Vec2 p) {
  if (const auto* c = std::get_if<Circle>(&obstacle)) {
    Vec2 n = unit(p - c->center);
    if (n == Vec2{}) n = {1.0, 0.0};
    return {c->center + n * c->radius, n};
  }
  const auto& v = std::get<ConvexPolygon>(obstacle).vertices;
  const bool inside = detail::strictly_inside(std::get<ConvexPolygon>(obstacle), p);
  double best = std::numeric_limits<double>::infinity();
  BoundaryPoint out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec2 a = v[i];
    const Vec2 b = v[(i + 1) % v.size()];
    const Vec2 q = detail::closest_on_segment(a, b, p);
    const double d = distance(p, q);
    if (d < best) {
      best = d;
      out.point = q;
      out.inward_normal = (d > 1e-12 && !inside) ? (p - q) / d : detail::edge_outward_normal(a, b);
    }
  }
  return out;
}

/// Closest point on the obstacle boundary to p.
///
/// p must lie outside or on the boundary; a point strictly inside means an
/// agent has penetrated the obstacle and raises SimulationFault.
inline BoundaryPoint closest_boundary_point(const Obstacle& obstacle, Vec2 p) {
  if (!is_finite(p)) throw ArgumentError("closest_boundary_point: non-finite query point");
  if (strictly_inside(obstacle, p)) throw SimulationFault("agent penetrated obstacle");
  return project_to_boundary(obstacle, p);
}

/// Closest arena wall point. Equidistant walls resolve in the order left,
/// right, bottom, top.
inline BoundaryPoint closest_wall_point(const Arena& arena, Vec2 p) {
  if (!is_finite(p)) throw ArgumentError("closest_wall_point: non-finite query point");
  if (!arena.contains(p)) throw SimulationFault("agent escaped arena");

  const std::array<double, 4> d{p.x, arena.side - p.x, p.y, arena.side - p.y};
  std::size_t wall = 0;
  for (std::size_t i = 1; i < d.size(); ++i)
    if (d[i] < d[wall]) wall = i;

  switch (static_cast<Wall>(wall)) {
    case Wall::left: return {{0.0, p.y}, {1.0, 0.0}};
    case Wall::right: return {{arena.side, p.y}, {-1.0, 0.0}};
    case Wall::bottom: return {{p.x, 0.0}, {0.0, 1.0}};
    case Wall::top: break;
  }
  return {{p.x, arena.side}, {0.0, -1.0}};
}

/// First boundary crossing along the segment from -> to.
struct Crossing {
  double t = 0.0;  // fraction of the segment in [0, 1]
  Vec2 point;
  Vec2 normal;  // unit, pointing back into free space
};

namespace detail {

inline std::optional<Crossing> crossing(const Circle& c, Vec2 from, Vec2 to) {
  const Vec2 d = to - from;
  const Vec2 f = from - c.center;
  const double qa = norm_sq(d);
  if (qa == 0.0) return std::nullopt;
  const double qb = 2.0 * dot(f, d);
  if (qb >= 0.0) return std::nullopt;  // moving away from the center
  const double qc = norm_sq(f) - c.radius * c.radius;
  const double disc = qb * qb - 4.0 * qa * qc;
  if (disc < 0.0) return std::nullopt;
  const double t = (-qb - std::sqrt(disc)) / (2.0 * qa);
  if (t < 0.0 || t > 1.0) return std::nullopt;
  const Vec2 hit = from + d * t;
  return Crossing{t, hit, unit(hit - c.center)};
}

inline std::optional<Crossing> crossing(const ConvexPolygon& poly, Vec2 from, Vec2 to) {
  const auto& v = poly.vertices;
  const Vec2 d = to - from;
  std::optional<Crossing> best;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec2 a = v[i];
    const Vec2 e = v[(i + 1) % v.size()] - a;
    const double denom = cross(d, e);
    if (denom == 0.0) continue;
    const double t = cross(a - from, e) / denom;
    const double u = cross(a - from, d) / denom;
    if (t < 0.0 || t > 1.0 || u < 0.0 || u > 1.0) continue;
    const Vec2 n = edge_outward_normal(a, a + e);
    if (dot(n, d) >= 0.0) continue;  // leaving, not entering
    if (!best || t < best->t) best = Crossing{t, from + d * t, n};
  }
  return best;
}

}  // namespace detail

/// Earliest crossing of an arena wall or obstacle boundary on from -> to, if any.
/// `from` is assumed to be in free space.
inline std::optional<Crossing> first_crossing(const Arena& arena, std::span<const Obstacle> obstacles,
                                              Vec2 from, Vec2 to) {
  std::optional<Crossing> best;
  auto consider = [&](std::optional<Crossing> c) {
    if (c && (!best || c->t < best->t)) best = c;
  };

  const Vec2 d = to - from;
  if (to.x <= 0.0 && d.x < 0.0) {
    const double t = -from.x / d.x;
    consider(Crossing{t, {0.0, from.y + d.y * t}, {1.0, 0.0}});
  }
  if (to.x >= arena.side && d.x > 0.0) {
    const double t = (arena.side - from.x) / d.x;
    consider(Crossing{t, {arena.side, from.y + d.y * t}, {-1.0, 0.0}});
  }
  if (to.y <= 0.0 && d.y < 0.0) {
    const double t = -from.y / d.y;
    consider(Crossing{t, {from.x + d.x * t, 0.0}, {0.0, 1.0}});
  }
  if (to.y >= arena.side && d.y > 0.0) {
    const double t = (arena.side - from.y) / d.y;
    consider(Crossing{t, {from.x + d.x * t, arena.side}, {0.0, -1.0}});
  }
  for (const auto& o : obstacles)
    consider(std::visit([&](const auto& shape) { return detail::crossing(shape, from, to); }, o));
  return best;
}

/// Specular reflection of a direction about a boundary normal.
inline Vec2 reflect(Vec2 dir, Vec2 normal) { return dir - normal * (2.0 * dot(dir, normal)); }

namespace detail {

inline std::vector<Vec2> polygon_axes(const ConvexPolygon& poly) {
  std::vector<Vec2> axes;
  const auto& v = poly.vertices;
  for (std::size_t i = 0; i < v.size(); ++i) axes.push_back(edge_outward_normal(v[i], v[(i + 1) % v.size()]));
  return axes;
}

inline std::pair<double, double> project(const ConvexPolygon& poly, Vec2 axis) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (Vec2 p : poly.vertices) {
    lo = std::min(lo, dot(p, axis));
    hi = std::max(hi, dot(p, axis));
  }
  return {lo, hi};
}

inline bool overlap(const Circle& a, const Circle& b) {
  return distance(a.center, b.center) <= a.radius + b.radius;
}

inline bool overlap(const ConvexPolygon& p, const Circle& c) {
  if (strictly_inside(p, c.center)) return true;
  return distance(closest_boundary_point(Obstacle{p}, c.center).point, c.center) <= c.radius;
}

inline bool overlap(const Circle& c, const ConvexPolygon& p) { return overlap(p, c); }

inline bool overlap(const ConvexPolygon& a, const ConvexPolygon& b) {
  for (const auto* poly : {&a, &b}) {
    for (Vec2 axis : polygon_axes(*poly)) {
      const auto [alo, ahi] = project(a, axis);
      const auto [blo, bhi] = project(b, axis);
      if (ahi < blo || bhi < alo) return false;
    }
  }
  return true;
}

}  // namespace detail

/// True when the two obstacles touch or intersect.
inline bool overlap(const Obstacle& a, const Obstacle& b) {
  return std::visit([](const auto& x, const auto& y) { return detail::overlap(x, y); }, a, b);
}

}  // namespace swarm_entrap
