#pragma once

// Adaptive target selection. Every agent scores each target as a weighted sum
// of its distance, the number of other agents already committed to it, and
// any number of extra per-target factors, then pursues the lowest score.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "swarm_entrap/controller.hpp"
#include "swarm_entrap/errors.hpp"
#include "swarm_entrap/rng.hpp"
#include "swarm_entrap/vec2.hpp"

namespace swarm_entrap {

/// An additional score row, e.g. target priority. `values` holds one entry per target.
struct ExtraFactor {
  std::string name;
  double weight = 0.0;
  std::vector<double> values;

  friend bool operator==(const ExtraFactor&, const ExtraFactor&) = default;
};

struct DecisionWeights {
  double a = 1.0;   // per meter of distance
  double b = 100.0;  // per agent already committed
  std::vector<ExtraFactor> extra;

  void validate(std::size_t num_targets) const {
    if (!std::isfinite(a) || a <= 0.0) throw ArgumentError("decision weight a must be positive");
    if (!std::isfinite(b) || b < 0.0) throw ArgumentError("decision weight b must be non-negative");
    for (const auto& f : extra) {
      if (!std::isfinite(f.weight)) throw ArgumentError("extra factor '" + f.name + "' has a non-finite weight");
      if (f.values.size() != num_targets)
        throw ArgumentError("extra factor '" + f.name + "' needs one value per target");
      for (double v : f.values)
        if (!std::isfinite(v)) throw ArgumentError("extra factor '" + f.name + "' has a non-finite value");
    }
  }

  friend bool operator==(const DecisionWeights&, const DecisionWeights&) = default;
};

/// Total agent -> target map with the step of each agent's last switch.
struct Assignment {
  std::size_t num_targets = 0;
  std::vector<TargetId> target_of;
  std::vector<std::int64_t> last_switch;

  std::size_t num_agents() const { return target_of.size(); }

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

/// Number of agents other than `self_id` currently committed to `target_id`.
inline std::size_t count_surrounding(TargetId target_id, const Assignment& assignment, AgentId self_id) {
  if (target_id >= assignment.num_targets) throw ArgumentError("count_surrounding: unknown target id");
  std::size_t n = 0;
  for (std::size_t i = 0; i < assignment.target_of.size(); ++i)
    if (i != self_id && assignment.target_of[i] == target_id) ++n;
  return n;
}

/// Score row: a*distance + b*count + sum of weighted extra rows.
inline std::vector<double> seq_row(std::span<const double> distances, std::span<const double> counts,
                                   std::span<const std::span<const double>> extra_rows,
                                   std::span<const double> extra_weights, double a, double b) {
  const std::size_t n = distances.size();
  if (n == 0) throw ArgumentError("seq_row: no targets");
  if (counts.size() != n) throw ArgumentError("seq_row: counts row length mismatch");
  if (extra_rows.size() != extra_weights.size()) throw ArgumentError("seq_row: one weight per extra row");
  for (auto row : extra_rows)
    if (row.size() != n) throw ArgumentError("seq_row: extra row length mismatch");

  std::vector<double> seq(n);
  for (std::size_t k = 0; k < n; ++k) {
    double s = a * distances[k] + b * counts[k];
    for (std::size_t f = 0; f < extra_rows.size(); ++f) s += extra_weights[f] * extra_rows[f][k];
    seq[k] = s;
  }
  return seq;
}

/// Same as above, drawing extra rows and weights from `weights.extra`.
inline std::vector<double> seq_row(std::span<const double> distances, std::span<const double> counts,
                                   const DecisionWeights& weights) {
  std::vector<std::span<const double>> rows;
  std::vector<double> w;
  for (const auto& f : weights.extra) {
    rows.emplace_back(f.values);
    w.push_back(f.weight);
  }
  return seq_row(distances, counts, rows, w, weights.a, weights.b);
}

/// Lowest score wins, lowest index on exact ties. The current target is kept
/// while its score is within `hysteresis` of the minimum.
inline TargetId choose_target(std::optional<TargetId> current, std::span<const double> seq, double hysteresis) {
  if (seq.empty()) throw ArgumentError("choose_target: empty score row");
  TargetId best = 0;
  for (TargetId k = 1; k < seq.size(); ++k)
    if (seq[k] < seq[best]) best = k;
  if (current && *current < seq.size() && seq[*current] <= seq[best] + hysteresis) return *current;
  return best;
}

namespace detail {

// One sequential pass in a random agent order. Counts are updated as agents
// commit, so later agents react to earlier switches within the same pass.
inline void sequential_pass(std::span<const Vec2> agent_pos, std::span<const Vec2> target_pos,
                            std::vector<std::optional<TargetId>>& current, std::vector<std::int64_t>& last_switch,
                            const DecisionWeights& weights, double hysteresis, Rng& rng, std::int64_t step) {
  const std::size_t n_targets = target_pos.size();
  std::vector<double> counts(n_targets, 0.0);
  for (const auto& c : current)
    if (c) counts[*c] += 1.0;

  std::vector<double> distances(n_targets);
  std::vector<double> others(n_targets);
  for (std::size_t i : rng.permutation(agent_pos.size())) {
    for (std::size_t k = 0; k < n_targets; ++k) {
      distances[k] = distance(agent_pos[i], target_pos[k]);
      others[k] = counts[k] - (current[i] == k ? 1.0 : 0.0);
    }
    const auto seq = seq_row(distances, others, weights);
    const TargetId chosen = choose_target(current[i], seq, hysteresis);
    if (current[i] != chosen) {
      if (current[i]) counts[*current[i]] -= 1.0;
      counts[chosen] += 1.0;
      current[i] = chosen;
      last_switch[i] = step;
    }
  }
}

}  // namespace detail

/// Initial commitment: every agent starts unassigned and picks in a seeded random order.
inline Assignment initial_assignment(std::span<const Vec2> agent_pos, std::span<const Vec2> target_pos,
                                     const DecisionWeights& weights, Rng& rng) {
  if (target_pos.empty()) throw ArgumentError("initial_assignment: no targets");
  std::vector<std::optional<TargetId>> current(agent_pos.size());
  Assignment out;
  out.num_targets = target_pos.size();
  out.last_switch.assign(agent_pos.size(), 0);
  detail::sequential_pass(agent_pos, target_pos, current, out.last_switch, weights, 0.0, rng, 0);
  out.target_of.reserve(current.size());
  for (const auto& c : current) out.target_of.push_back(*c);
  return out;
}

/// Re-evaluates every agent's commitment once, in a seeded random order.
inline Assignment update_assignments(std::span<const Vec2> agent_pos, std::span<const Vec2> target_pos,
                                     Assignment assignment, const DecisionWeights& weights, double hysteresis,
                                     Rng& rng, std::int64_t step) {
  if (assignment.num_agents() != agent_pos.size() || assignment.num_targets != target_pos.size())
    throw ArgumentError("update_assignments: assignment does not match the snapshot");
  std::vector<std::optional<TargetId>> current(assignment.target_of.begin(), assignment.target_of.end());
  detail::sequential_pass(agent_pos, target_pos, current, assignment.last_switch, weights, hysteresis, rng, step);
  for (std::size_t i = 0; i < current.size(); ++i) assignment.target_of[i] = *current[i];
  return assignment;
}

}  // namespace swarm_entrap
