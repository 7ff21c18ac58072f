#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "swarm_entrap/controller.hpp"
#include "swarm_entrap/decision.hpp"
#include "swarm_entrap/errors.hpp"
#include "swarm_entrap/geometry.hpp"
#include "swarm_entrap/rng.hpp"
#include "swarm_entrap/target_motion.hpp"
#include "swarm_entrap/vec2.hpp"

namespace swarm_entrap {

struct AgentState {
  AgentId id = 0;
  Vec2 pos;
  Vec2 vel;  // m/step
  TargetId assigned_target = 0;
};

/// Agents drawn uniformly (with rejection) from an axis-aligned rectangle.
struct AgentSpawn {
  std::size_t count = 12;
  Vec2 lower{0.0, 0.0};
  Vec2 upper{125.0, 125.0};
  double min_separation = 5.0;  // m, between spawned agents

  friend bool operator==(const AgentSpawn&, const AgentSpawn&) = default;
};

struct Scenario {
  std::string name;
  std::string description;
  Arena arena;
  std::vector<Obstacle> obstacles;
  std::variant<AgentSpawn, std::vector<Vec2>> agents = AgentSpawn{};
  std::vector<Vec2> targets;
  double target_speed = 1.8;  // m/step
  ControllerParams controller;
  DecisionWeights decision;
  double hysteresis = 5.0;  // Seq units
  LevyParams levy;
  std::int64_t steps = 1000;
  std::uint64_t seed = 1;
  double sector_radius = 32.0;
  std::size_t sector_count = 6;
  std::int64_t sample_interval = 1;
  bool baseline = false;  // pure nearest-target decisions

  /// Decision weights actually used; the baseline drops crowding and extras.
  DecisionWeights effective_weights() const {
    if (!baseline) return decision;
    DecisionWeights w = decision;
    w.b = 0.0;
    for (auto& f : w.extra) f.weight = 0.0;
    return w;
  }

  double effective_hysteresis() const { return baseline ? 0.0 : hysteresis; }

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Full simulation state between steps.
struct World {
  std::int64_t step = 0;
  std::vector<AgentState> agents;
  std::vector<TargetState> targets;
  Assignment assignment;
};

/// One recorded step.
struct Frame {
  std::int64_t step = 0;
  std::vector<AgentState> agents;
  std::vector<TargetState> targets;
};

/// frames[k] is the state after k steps; frames[0] is the initial state.
struct Trajectory {
  std::vector<Frame> frames;
};

inline Frame snapshot(const World& world) { return {world.step, world.agents, world.targets}; }

/// Inset used to keep integrated positions strictly inside the arena.
inline constexpr double kArenaInset = 1e-6;

namespace detail {

inline std::vector<Vec2> agent_positions(const World& w) {
  std::vector<Vec2> p;
  p.reserve(w.agents.size());
  for (const auto& a : w.agents) p.push_back(a.pos);
  return p;
}

inline std::vector<Vec2> target_positions(const World& w) {
  std::vector<Vec2> p;
  p.reserve(w.targets.size());
  for (const auto& t : w.targets) p.push_back(t.pos);
  return p;
}

inline std::vector<Vec2> spawn_agents(const Scenario& s, Rng& rng) {
  if (const auto* explicit_pos = std::get_if<std::vector<Vec2>>(&s.agents)) return *explicit_pos;
  const auto& spawn = std::get<AgentSpawn>(s.agents);
  constexpr int kMaxAttempts = 100000;
  std::vector<Vec2> out;
  out.reserve(spawn.count);
  int attempts = 0;
  while (out.size() < spawn.count) {
    if (++attempts > kMaxAttempts) throw ScenarioError("agents.spawn", "could not place agents; region too crowded");
    const Vec2 p{rng.uniform(spawn.lower.x, spawn.upper.x), rng.uniform(spawn.lower.y, spawn.upper.y)};
    if (!s.arena.contains(p) || inside_any(s.obstacles, p)) continue;
    const bool crowded = std::any_of(out.begin(), out.end(),
                                     [&](Vec2 q) { return distance(p, q) < spawn.min_separation; });
    if (!crowded) out.push_back(p);
  }
  return out;
}

}  // namespace detail

/// Seeded initial state: spawned agents at rest, targets with no active segment,
/// and a first commitment made in random agent order.
inline World initial_world(const Scenario& s, Rng& rng) {
  World w;
  const auto positions = detail::spawn_agents(s, rng);
  for (std::size_t i = 0; i < positions.size(); ++i) w.agents.push_back({i, positions[i], {}, 0});
  for (std::size_t k = 0; k < s.targets.size(); ++k) {
    TargetState t;
    t.id = k;
    t.pos = s.targets[k];
    t.speed = s.target_speed;
    w.targets.push_back(t);
  }
  if (w.targets.empty()) throw ScenarioError("targets", "at least one target is required");
  w.assignment = initial_assignment(positions, s.targets, s.effective_weights(), rng);
  for (auto& a : w.agents) a.assigned_target = w.assignment.target_of[a.id];
  return w;
}

/// Desired velocity of every agent from one immutable snapshot.
/// `order` permutes the evaluation order only; results are order-independent.
inline std::vector<Vec2> desired_velocities(const World& w, const Scenario& s, std::span<const std::size_t> order) {
  std::vector<TargetView> targets;
  targets.reserve(w.targets.size());
  for (const auto& t : w.targets) targets.push_back({t.id, t.pos});

  std::vector<Vec2> out(w.agents.size());
  std::vector<Neighbor> neighbors;
  for (std::size_t i : order) {
    const auto& self = w.agents[i];
    neighbors.clear();
    for (const auto& other : w.agents)
      if (other.id != self.id) neighbors.push_back({other.id, other.pos});
    WorldView view;
    view.self_id = self.id;
    view.self_pos = self.pos;
    view.self_vel = self.vel;
    view.neighbors = neighbors;
    view.targets = targets;
    view.assignment = self.assigned_target;
    view.arena = s.arena;
    view.obstacles = s.obstacles;
    out[i] = desired_velocity(view, s.controller);
  }
  return out;
}

inline std::vector<Vec2> desired_velocities(const World& w, const Scenario& s) {
  std::vector<std::size_t> order(w.agents.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  return desired_velocities(w, s, order);
}

/// One discrete step: decide, compute velocities from the decided snapshot,
/// integrate agents, then move targets.
inline World step(World w, const Scenario& s, Rng& rng) {
  const std::int64_t next = w.step + 1;

  w.assignment = update_assignments(detail::agent_positions(w), detail::target_positions(w), std::move(w.assignment),
                                    s.effective_weights(), s.effective_hysteresis(), rng, next);
  for (auto& a : w.agents) a.assigned_target = w.assignment.target_of[a.id];

  const auto velocities = desired_velocities(w, s);

  const double lo = kArenaInset;
  const double hi = s.arena.side - kArenaInset;
  for (auto& a : w.agents) {
    a.vel = velocities[a.id];
    a.pos += a.vel;
    a.pos.x = std::clamp(a.pos.x, lo, hi);
    a.pos.y = std::clamp(a.pos.y, lo, hi);
  }

  for (auto& t : w.targets) {
    t = target_step(t, s.arena, s.obstacles, s.levy, rng);
    t.pos.x = std::clamp(t.pos.x, lo, hi);
    t.pos.y = std::clamp(t.pos.y, lo, hi);
  }

  w.step = next;
  return w;
}

inline Trajectory run(const Scenario& s) {
  Rng rng(s.seed);
  World w = initial_world(s, rng);
  Trajectory traj;
  traj.frames.reserve(static_cast<std::size_t>(s.steps) + 1);
  traj.frames.push_back(snapshot(w));
  for (std::int64_t k = 0; k < s.steps; ++k) {
    w = step(std::move(w), s, rng);
    traj.frames.push_back(snapshot(w));
  }
  return traj;
}

}  // namespace swarm_entrap
