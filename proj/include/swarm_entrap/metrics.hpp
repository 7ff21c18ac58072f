#pragma once

// Offline evaluation of a finished trajectory: grouping counts, sector
// occupancy around each target, first-encirclement times, distance travelled
// until every target was encircled, pairwise safety distance, and the cosine
// correlation of consecutive agent velocities.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "swarm_entrap/errors.hpp"
#include "swarm_entrap/geometry.hpp"
#include "swarm_entrap/simulator.hpp"
#include "swarm_entrap/vec2.hpp"

namespace swarm_entrap {

struct MetricsReport {
  std::vector<std::int64_t> sample_steps;
  std::vector<std::vector<std::size_t>> agents_per_target;   // [sample][target], by assignment
  std::vector<std::vector<std::size_t>> agents_near_target;  // [sample][target], within sector radius
  std::vector<std::vector<std::vector<std::size_t>>> sector_occupancy;  // [sample][target][sector]
  std::vector<std::optional<std::int64_t>> entrap_time_per_target;
  std::optional<std::int64_t> entrap_time_first;
  std::optional<std::int64_t> entrap_time_all;
  std::optional<double> avg_entrap_distance;
  std::vector<double> min_pairwise_distance;  // [sample]; +inf with fewer than two agents
  double run_min_pairwise_distance = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> velocity_correlation;  // [agent][sample], samples at step >= 1
  std::vector<std::int64_t> velocity_correlation_steps;
  double mean_velocity_correlation = 1.0;
  double max_agent_speed = 0.0;
  std::size_t arena_escapes = 0;
  std::size_t collision_events = 0;
};

/// Sector of agent_pos around target_pos; sector 0 starts at the +x axis and
/// sectors advance counterclockwise.
inline std::size_t sector_index(Vec2 agent_pos, Vec2 target_pos, std::size_t sector_count = 6) {
  if (sector_count == 0) throw ArgumentError("sector_index: sector_count must be positive");
  const Vec2 d = agent_pos - target_pos;
  if (d.x == 0.0 && d.y == 0.0) throw ArgumentError("sector_index: agent coincides with target");
  const double width = 2.0 * std::numbers::pi / static_cast<double>(sector_count);
  const auto idx = static_cast<std::size_t>(std::floor(heading_of(d) / width));
  return std::min(idx, sector_count - 1);
}

/// Agents within `radius` of the target, binned by sector. An agent exactly on
/// the target has no defined sector and is not counted.
inline std::vector<std::size_t> sector_occupancy(std::span<const AgentState> agents, Vec2 target_pos, double radius,
                                                 std::size_t sector_count = 6) {
  std::vector<std::size_t> bins(sector_count, 0);
  for (const auto& a : agents) {
    const double d = distance(a.pos, target_pos);
    if (d > radius || a.pos == target_pos) continue;
    ++bins[sector_index(a.pos, target_pos, sector_count)];
  }
  return bins;
}

inline bool fully_occupied(std::span<const std::size_t> bins) {
  return !bins.empty() && std::all_of(bins.begin(), bins.end(), [](std::size_t c) { return c >= 1; });
}

struct EntrapmentTimes {
  std::vector<std::optional<std::int64_t>> per_target;
  std::optional<std::int64_t> first;  // earliest over targets
  std::optional<std::int64_t> all;    // latest over targets; empty if any target never encircled
};

inline EntrapmentTimes entrapment_times(const Trajectory& traj, double radius, std::size_t sector_count = 6) {
  EntrapmentTimes out;
  if (traj.frames.empty()) return out;
  const std::size_t n_targets = traj.frames.front().targets.size();
  out.per_target.assign(n_targets, std::nullopt);
  for (const auto& f : traj.frames) {
    for (std::size_t k = 0; k < n_targets; ++k) {
      if (out.per_target[k]) continue;
      if (fully_occupied(sector_occupancy(f.agents, f.targets[k].pos, radius, sector_count)))
        out.per_target[k] = f.step;
    }
  }
  bool all = n_targets > 0;
  std::int64_t latest = 0;
  for (const auto& t : out.per_target) {
    if (!t) {
      all = false;
      continue;
    }
    if (!out.first || *t < *out.first) out.first = t;
    latest = std::max(latest, *t);
  }
  if (all) out.all = latest;
  return out;
}

/// Mean over agents of the path length walked from the first frame up to `until_step`.
inline double mean_path_length(const Trajectory& traj, std::int64_t until_step) {
  if (traj.frames.empty() || traj.frames.front().agents.empty()) return 0.0;
  const std::size_t n = traj.frames.front().agents.size();
  std::vector<double> walked(n, 0.0);
  for (std::size_t f = 1; f < traj.frames.size() && traj.frames[f].step <= until_step; ++f)
    for (std::size_t i = 0; i < n; ++i)
      walked[i] += distance(traj.frames[f].agents[i].pos, traj.frames[f - 1].agents[i].pos);
  double sum = 0.0;
  for (double w : walked) sum += w;
  return sum / static_cast<double>(n);
}

/// Mean distance travelled by agents until every target was first encircled.
inline std::optional<double> avg_entrap_distance(const Trajectory& traj, double radius, std::size_t sector_count = 6) {
  const auto times = entrapment_times(traj, radius, sector_count);
  if (!times.all) return std::nullopt;
  return mean_path_length(traj, *times.all);
}

inline double min_pairwise_distance(std::span<const AgentState> agents) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < agents.size(); ++i)
    for (std::size_t j = i + 1; j < agents.size(); ++j) best = std::min(best, distance(agents[i].pos, agents[j].pos));
  return best;
}

/// Cosine between consecutive velocities. A (near-)stationary agent counts as 1.
inline double velocity_correlation(Vec2 v_prev, Vec2 v_curr) {
  const double a = norm(v_prev);
  const double b = norm(v_curr);
  if (a < 1e-9 || b < 1e-9) return 1.0;
  return std::clamp(dot(v_prev, v_curr) / (a * b), -1.0, 1.0);
}

inline std::vector<std::size_t> agents_per_target(std::span<const AgentState> agents, std::size_t num_targets) {
  std::vector<std::size_t> counts(num_targets, 0);
  for (const auto& a : agents) {
    if (a.assigned_target >= num_targets) throw ArgumentError("agents_per_target: unknown target id");
    ++counts[a.assigned_target];
  }
  return counts;
}

/// Agents within `radius` of each target, regardless of assignment.
inline std::vector<std::size_t> agents_near_target(const Frame& f, double radius) {
  std::vector<std::size_t> counts(f.targets.size(), 0);
  for (std::size_t k = 0; k < f.targets.size(); ++k)
    for (const auto& a : f.agents)
      if (distance(a.pos, f.targets[k].pos) <= radius) ++counts[k];
  return counts;
}

/// Number of times an agent entered an obstacle.
inline std::size_t collision_events(const Trajectory& traj, std::span<const Obstacle> obstacles) {
  std::size_t events = 0;
  std::vector<bool> inside;
  for (const auto& f : traj.frames) {
    inside.resize(f.agents.size(), false);
    for (std::size_t i = 0; i < f.agents.size(); ++i) {
      const bool now = inside_any(obstacles, f.agents[i].pos);
      if (now && !inside[i]) ++events;
      inside[i] = now;
    }
  }
  return events;
}

inline MetricsReport compute_metrics(const Trajectory& traj, const Scenario& s) {
  if (traj.frames.empty()) throw ArgumentError("compute_metrics: empty trajectory");
  MetricsReport r;
  const std::size_t n_targets = traj.frames.front().targets.size();
  const std::size_t n_agents = traj.frames.front().agents.size();
  const auto interval = std::max<std::int64_t>(1, s.sample_interval);

  r.velocity_correlation.assign(n_agents, {});
  double corr_sum = 0.0;
  std::size_t corr_count = 0;
  for (std::size_t fi = 0; fi < traj.frames.size(); ++fi) {
    const auto& f = traj.frames[fi];
    const double mpd = min_pairwise_distance(f.agents);
    r.run_min_pairwise_distance = std::min(r.run_min_pairwise_distance, mpd);
    for (const auto& a : f.agents) {
      r.max_agent_speed = std::max(r.max_agent_speed, norm(a.vel));
      if (!s.arena.contains(a.pos)) ++r.arena_escapes;
    }

    std::vector<double> corr;
    if (fi > 0) {
      const auto& prev = traj.frames[fi - 1];
      for (std::size_t i = 0; i < n_agents; ++i) {
        const double c = velocity_correlation(prev.agents[i].vel, f.agents[i].vel);
        corr.push_back(c);
        corr_sum += c;
        ++corr_count;
      }
    }

    if (f.step % interval != 0) continue;
    r.sample_steps.push_back(f.step);
    r.agents_per_target.push_back(agents_per_target(f.agents, n_targets));
    r.agents_near_target.push_back(agents_near_target(f, s.sector_radius));
    std::vector<std::vector<std::size_t>> occ;
    for (const auto& t : f.targets) occ.push_back(sector_occupancy(f.agents, t.pos, s.sector_radius, s.sector_count));
    r.sector_occupancy.push_back(std::move(occ));
    r.min_pairwise_distance.push_back(mpd);
    if (fi > 0) {
      r.velocity_correlation_steps.push_back(f.step);
      for (std::size_t i = 0; i < n_agents; ++i) r.velocity_correlation[i].push_back(corr[i]);
    }
  }
  if (corr_count > 0) r.mean_velocity_correlation = corr_sum / static_cast<double>(corr_count);

  const auto times = entrapment_times(traj, s.sector_radius, s.sector_count);
  r.entrap_time_per_target = times.per_target;
  r.entrap_time_first = times.first;
  r.entrap_time_all = times.all;
  if (times.all) r.avg_entrap_distance = mean_path_length(traj, *times.all);
  r.collision_events = collision_events(traj, s.obstacles);
  return r;
}

}  // namespace swarm_entrap
