#pragma once

// MetricsReport <-> JSON. Missing entrapment times ("never") and infinite
// distances are written as null.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>

#include <json.hpp>

#include "swarm_entrap/metrics.hpp"

namespace swarm_entrap {

namespace detail {

inline nlohmann::ordered_json optional_json(const std::optional<std::int64_t>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

inline nlohmann::ordered_json finite_or_null(double v) {
  return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
}

inline std::optional<std::int64_t> optional_step(const nlohmann::ordered_json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<std::int64_t>();
}

inline double double_or_inf(const nlohmann::ordered_json& j) {
  return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

}  // namespace detail

inline nlohmann::ordered_json metrics_to_json(const MetricsReport& r) {
  using nlohmann::ordered_json;
  ordered_json j;
  ordered_json per_target = ordered_json::array();
  for (const auto& t : r.entrap_time_per_target) per_target.push_back(detail::optional_json(t));
  j["entrap_time_per_target"] = per_target;
  j["entrap_time_first"] = detail::optional_json(r.entrap_time_first);
  j["entrap_time_all"] = detail::optional_json(r.entrap_time_all);
  j["avg_entrap_distance"] = r.avg_entrap_distance ? ordered_json(*r.avg_entrap_distance) : ordered_json(nullptr);
  j["run_min_pairwise_distance"] = detail::finite_or_null(r.run_min_pairwise_distance);
  j["mean_velocity_correlation"] = r.mean_velocity_correlation;
  j["max_agent_speed"] = r.max_agent_speed;
  j["arena_escapes"] = r.arena_escapes;
  j["collision_events"] = r.collision_events;
  j["sample_steps"] = r.sample_steps;
  j["agents_per_target"] = r.agents_per_target;
  j["agents_near_target"] = r.agents_near_target;
  j["sector_occupancy"] = r.sector_occupancy;
  ordered_json mpd = ordered_json::array();
  for (double d : r.min_pairwise_distance) mpd.push_back(detail::finite_or_null(d));
  j["min_pairwise_distance"] = mpd;
  j["velocity_correlation_steps"] = r.velocity_correlation_steps;
  j["velocity_correlation"] = r.velocity_correlation;
  return j;
}

/// Text form used for metrics.json; stable byte-for-byte for equal reports.
inline std::string metrics_json_text(const MetricsReport& r) { return metrics_to_json(r).dump(2) + "\n"; }

inline MetricsReport metrics_from_json(const nlohmann::ordered_json& j) {
  MetricsReport r;
  for (const auto& t : j.at("entrap_time_per_target")) r.entrap_time_per_target.push_back(detail::optional_step(t));
  r.entrap_time_first = detail::optional_step(j.at("entrap_time_first"));
  r.entrap_time_all = detail::optional_step(j.at("entrap_time_all"));
  if (!j.at("avg_entrap_distance").is_null()) r.avg_entrap_distance = j.at("avg_entrap_distance").get<double>();
  r.run_min_pairwise_distance = detail::double_or_inf(j.at("run_min_pairwise_distance"));
  r.mean_velocity_correlation = j.at("mean_velocity_correlation").get<double>();
  r.max_agent_speed = j.at("max_agent_speed").get<double>();
  r.arena_escapes = j.at("arena_escapes").get<std::size_t>();
  r.collision_events = j.at("collision_events").get<std::size_t>();
  j.at("sample_steps").get_to(r.sample_steps);
  j.at("agents_per_target").get_to(r.agents_per_target);
  j.at("agents_near_target").get_to(r.agents_near_target);
  j.at("sector_occupancy").get_to(r.sector_occupancy);
  for (const auto& d : j.at("min_pairwise_distance")) r.min_pairwise_distance.push_back(detail::double_or_inf(d));
  j.at("velocity_correlation_steps").get_to(r.velocity_correlation_steps);
  j.at("velocity_correlation").get_to(r.velocity_correlation);
  return r;
}

}  // namespace swarm_entrap
