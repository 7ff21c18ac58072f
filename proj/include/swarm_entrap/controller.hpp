#pragma once

// Per-agent velocity law: target approach with a braking curve, agent and
// target repulsion, wall/obstacle avoidance through virtual boundary agents,
// and a final speed limit.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <string_view>

#include "swarm_entrap/errors.hpp"
#include "swarm_entrap/geometry.hpp"
#include "swarm_entrap/rng.hpp"
#include "swarm_entrap/vec2.hpp"

namespace swarm_entrap {

using AgentId = std::size_t;
using TargetId = std::size_t;

/// How the braking curve enters the wall/obstacle term.
///
/// `literal` evaluates D(r_id - r_wall); inside the active band that argument
/// is negative so the braking part vanishes. `distance_reversed` evaluates
/// D(r_wall - r_id) instead.
enum class WallTermVariant { literal, distance_reversed };

inline std::string_view to_string(WallTermVariant v) {
  return v == WallTermVariant::literal ? "literal" : "distance_reversed";
}

struct ControllerParams {
  double v_f = 1.5;        // base travel speed toward the target, m/step
  double C_t = 1.0;        // approach gain
  double a_t = 0.1;        // approach braking acceleration, m/step^2
  double p_t = 0.2;        // approach braking gain, 1/step
  double R_entrap = 20.0;  // stopping-ring radius, m
  double r_arep = 20.0;    // agent repulsion onset, m
  double p_arep = 0.45;    // agent repulsion gain, 1/step
  double r_trep = 25.0;    // target repulsion onset, m
  double p_trep = 0.3;     // target repulsion gain, 1/step
  double C_d = 0.15;       // wall/obstacle gain
  double r_wall = 8.0;     // wall safety distance, m
  double a_d = 0.5;        // m/step^2
  double p_d = 0.5;        // 1/step
  double v_limit = 4.0;    // m/step
  double v_shill = 4.0;    // virtual boundary agent speed, m/step
  WallTermVariant wall_term_variant = WallTermVariant::literal;

  /// Radius at which approach (v_f inward) and target repulsion balance.
  double equilibrium_radius() const { return r_trep - v_f / p_trep; }

  /// Throws ArgumentError naming the violated constraint.
  void validate() const {
    auto positive = [](double v, const char* name) {
      if (!std::isfinite(v) || v <= 0.0) throw ArgumentError(std::string(name) + " must be positive and finite");
    };
    auto non_negative = [](double v, const char* name) {
      if (!std::isfinite(v) || v < 0.0) throw ArgumentError(std::string(name) + " must be non-negative and finite");
    };
    positive(v_f, "v_f");
    non_negative(C_t, "C_t");
    positive(a_t, "a_t");
    positive(p_t, "p_t");
    positive(R_entrap, "R_entrap");
    positive(r_arep, "r_arep");
    positive(p_arep, "p_arep");
    positive(r_trep, "r_trep");
    positive(p_trep, "p_trep");
    non_negative(C_d, "C_d");
    positive(r_wall, "r_wall");
    positive(a_d, "a_d");
    positive(p_d, "p_d");
    positive(v_limit, "v_limit");
    positive(v_shill, "v_shill");
    if (v_f > v_limit) throw ArgumentError("v_f must not exceed v_limit");
    if (v_shill > v_limit) throw ArgumentError("v_shill must not exceed v_limit");
    if (r_trep < R_entrap) throw ArgumentError("r_trep must be >= R_entrap");
  }

  friend bool operator==(const ControllerParams&, const ControllerParams&) = default;
};

struct Neighbor {
  AgentId id = 0;
  Vec2 pos;
};

struct TargetView {
  TargetId id = 0;
  Vec2 pos;
};

/// Immutable snapshot of everything one agent sees when choosing its velocity.
struct WorldView {
  AgentId self_id = 0;
  Vec2 self_pos;
  Vec2 self_vel;
  std::span<const Neighbor> neighbors;
  std::span<const TargetView> targets;
  TargetId assignment = 0;
  Arena arena;
  std::span<const Obstacle> obstacles;
};

/// Smooth braking profile: linear near the stopping point, constant
/// deceleration far from it.
inline double braking_curve(double r, double a, double p) {
  if (!std::isfinite(r) || !std::isfinite(a) || !std::isfinite(p))
    throw ArgumentError("braking_curve: non-finite argument");
  if (a <= 0.0 || p <= 0.0) throw ArgumentError("braking_curve: a and p must be positive");
  if (r <= 0.0) return 0.0;
  if (r * p <= a / p) return r * p;
  return std::sqrt(2.0 * a * r - a * a / (p * p));
}

inline Vec2 approach_velocity(Vec2 self_pos, Vec2 target_pos, const ControllerParams& params) {
  const Vec2 to_target = target_pos - self_pos;
  const double r = norm(to_target);
  if (r < 1e-9) return {};
  const double speed = params.v_f + params.C_t * braking_curve(r - params.R_entrap, params.a_t, params.p_t);
  return to_target / r * speed;
}

namespace detail {

// Salt values keep agent/agent and agent/target directions independent.
inline constexpr std::uint64_t kAgentPairSalt = 0x5157'4152'4d41'4750ULL;
inline constexpr std::uint64_t kTargetPairSalt = 0x5441'5247'4554'5053ULL;

inline Vec2 pair_direction(std::uint64_t lo, std::uint64_t hi, std::uint64_t salt) {
  const std::uint64_t h = mix64(mix64(lo ^ salt) ^ hi);
  const double angle = static_cast<double>(h >> 11) * 0x1.0p-53 * 2.0 * std::numbers::pi;
  return from_heading(angle);
}

inline Vec2 linear_repulsion(Vec2 self_pos, Vec2 other_pos, double onset, double gain, Vec2 coincident_dir) {
  const Vec2 away = self_pos - other_pos;
  const double r = norm(away);
  if (r >= onset) return {};
  const Vec2 dir = r < 1e-9 ? coincident_dir : away / r;
  return dir * (gain * (onset - r));
}

}  // namespace detail

/// Repulsion felt by `self` from a nearby agent. Coincident agents are pushed
/// apart along a direction fixed by the id pair, opposite for the two members.
inline Vec2 agent_repulsion(Vec2 self_pos, Vec2 other_pos, const ControllerParams& params,
                            AgentId self_id = 0, AgentId other_id = 1) {
  if (!is_finite(self_pos) || !is_finite(other_pos)) throw ArgumentError("agent_repulsion: non-finite position");
  const auto lo = static_cast<std::uint64_t>(std::min(self_id, other_id));
  const auto hi = static_cast<std::uint64_t>(std::max(self_id, other_id));
  Vec2 dir = detail::pair_direction(lo, hi, detail::kAgentPairSalt);
  if (self_id > other_id) dir = -dir;
  return detail::linear_repulsion(self_pos, other_pos, params.r_arep, params.p_arep, dir);
}

/// One-way repulsion of an agent away from a target.
inline Vec2 target_repulsion(Vec2 self_pos, Vec2 target_pos, const ControllerParams& params,
                             AgentId self_id = 0, TargetId target_id = 0) {
  if (!is_finite(self_pos) || !is_finite(target_pos)) throw ArgumentError("target_repulsion: non-finite position");
  const Vec2 dir = detail::pair_direction(self_id, target_id, detail::kTargetPairSalt);
  return detail::linear_repulsion(self_pos, target_pos, params.r_trep, params.p_trep, dir);
}

/// Avoidance term from a virtual agent sitting at `boundary_point` and moving
/// along `inward_normal` at v_shill. Active only within r_wall of the boundary.
inline Vec2 boundary_term(Vec2 self_vel, Vec2 boundary_point, Vec2 inward_normal, Vec2 self_pos,
                          const ControllerParams& params) {
  if (!is_finite(self_vel) || !is_finite(boundary_point) || !is_finite(inward_normal) || !is_finite(self_pos))
    throw ArgumentError("boundary_term: non-finite input");
  const double r_id = distance(self_pos, boundary_point);
  if (r_id >= params.r_wall) return {};
  const Vec2 v_diff = inward_normal * params.v_shill - self_vel;
  const double v_id = norm(v_diff);
  if (v_id < 1e-9) return {};
  const double braking_arg =
      params.wall_term_variant == WallTermVariant::literal ? r_id - params.r_wall : params.r_wall - r_id;
  const double magnitude = std::max(0.0, v_id - braking_curve(braking_arg, params.a_d, params.p_d));
  return v_diff / v_id * (params.C_d * magnitude);
}

/// Rescales v to at most `limit` without changing its direction.
inline Vec2 limit_speed(Vec2 v, double limit) {
  const double n = norm(v);
  if (n <= limit) return v;
  return v * (limit / n);
}

inline Vec2 desired_velocity(const WorldView& view, const ControllerParams& params) {
  Vec2 v;
  for (const auto& n : view.neighbors) v += agent_repulsion(view.self_pos, n.pos, params, view.self_id, n.id);

  const TargetView* assigned = nullptr;
  for (const auto& t : view.targets) {
    v += target_repulsion(view.self_pos, t.pos, params, view.self_id, t.id);
    if (t.id == view.assignment) assigned = &t;
  }
  if (assigned == nullptr) throw ArgumentError("desired_velocity: assignment refers to an unknown target");
  v += approach_velocity(view.self_pos, assigned->pos, params);

  const auto wall = closest_wall_point(view.arena, view.self_pos);
  v += boundary_term(view.self_vel, wall.point, wall.inward_normal, view.self_pos, params);
  for (const auto& o : view.obstacles) {
    // An agent already inside an obstacle (a recorded collision) is steered
    // out along the normal of the nearest edge.
    const auto b = strictly_inside(o, view.self_pos) ? project_to_boundary(o, view.self_pos)
                                                     : closest_boundary_point(o, view.self_pos);
    v += boundary_term(view.self_vel, b.point, b.inward_normal, view.self_pos, params);
  }
  return limit_speed(v, params.v_limit);
}

}  // namespace swarm_entrap
