#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>

#include "swarm_entrap/controller.hpp"
#include "swarm_entrap/errors.hpp"
#include "swarm_entrap/geometry.hpp"
#include "swarm_entrap/rng.hpp"
#include "swarm_entrap/vec2.hpp"

namespace swarm_entrap {

/// Lévy walk: constant speed, uniform headings, Pareto-tailed segment lengths.
struct LevyParams {
  double alpha = 1.5;     // tail exponent, 1 < alpha <= 2
  double min_step = 5.0;  // m
  double max_step = 125.0;

  void validate() const {
    if (!std::isfinite(alpha) || alpha <= 1.0 || alpha > 2.0) throw ArgumentError("levy alpha must lie in (1, 2]");
    if (!std::isfinite(min_step) || min_step <= 0.0) throw ArgumentError("levy min_step must be positive");
    if (!std::isfinite(max_step) || max_step <= min_step) throw ArgumentError("levy max_step must exceed min_step");
  }

  friend bool operator==(const LevyParams&, const LevyParams&) = default;
};

struct TargetState {
  TargetId id = 0;
  Vec2 pos;
  Vec2 vel;  // displacement over the last step
  double speed = 0.0;
  double heading = 0.0;  // [0, 2*pi)
  double segment_remaining = 0.0;
};

/// Unclamped Pareto draw: min_step * u^(-1/alpha), u uniform on (0, 1].
inline double sample_levy_raw(Rng& rng, const LevyParams& params) {
  const double u = rng.uniform01_open_low();
  return params.min_step * std::pow(u, -1.0 / params.alpha);
}

inline double sample_levy_length(Rng& rng, const LevyParams& params) {
  return std::clamp(sample_levy_raw(rng, params), params.min_step, params.max_step);
}

/// Advances one target by one step.
///
/// A target that hits a wall or obstacle is reflected specularly and its
/// segment is cut to zero, so a new heading and length are drawn next step.
inline TargetState target_step(TargetState state, const Arena& arena, std::span<const Obstacle> obstacles,
                               const LevyParams& levy, Rng& rng) {
  if (state.segment_remaining <= 0.0) {
    state.heading = rng.uniform01() * 2.0 * std::numbers::pi;
    state.segment_remaining = sample_levy_length(rng, levy);
  }

  const Vec2 start = state.pos;
  const double travel = std::min(state.speed, state.segment_remaining);
  const Vec2 dir = from_heading(state.heading);
  const Vec2 end = start + dir * travel;

  const auto hit = first_crossing(arena, obstacles, start, end);
  if (!hit) {
    state.pos = end;
    state.segment_remaining -= travel;
  } else {
    const Vec2 reflected = reflect(dir, hit->normal);
    const Vec2 bounced = hit->point + reflected * (travel * (1.0 - hit->t));
    const bool clean = arena.contains(bounced) && !inside_any(obstacles, bounced) &&
                       !first_crossing(arena, obstacles, hit->point, bounced);
    if (clean) {
      state.pos = bounced;
    } else {
      // Stop just short of the boundary on the incoming path.
      const double back = std::min(1e-6, 0.5 * travel * hit->t);
      state.pos = hit->point - dir * back;
    }
    state.heading = heading_of(reflected);
    state.segment_remaining = 0.0;
  }
  state.vel = state.pos - start;
  return state;
}

}  // namespace swarm_entrap
