#pragma once

// JSON scenario files.
//
// Every object is checked for unknown keys, every parameter invariant is
// enforced at load time, and optional keys that were omitted are reported
// back so the run log can echo the defaults that were applied.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "swarm_entrap/errors.hpp"
#include "swarm_entrap/simulator.hpp"

namespace swarm_entrap {

inline constexpr int kScenarioSchemaVersion = 1;

struct LoadedScenario {
  Scenario scenario;
  std::vector<std::string> defaults_applied;  // "controller.v_f = 1.5", ...
};

namespace detail {

using nlohmann::json;

inline std::string join_path(const std::string& base, const std::string& key) {
  return base.empty() ? key : base + "." + key;
}

inline std::string number_text(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

class ScenarioReader {
 public:
  explicit ScenarioReader(std::vector<std::string>& defaults) : defaults_(defaults) {}

  void reject_unknown(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) const {
    if (!obj.is_object()) throw ScenarioError(path, "expected an object");
    const std::set<std::string> known(allowed.begin(), allowed.end());
    for (const auto& [key, value] : obj.items())
      if (!known.contains(key)) throw ScenarioError(join_path(path, key), "unknown key");
  }

  const json& required(const json& obj, const std::string& path, const char* key) const {
    if (!obj.contains(key)) throw ScenarioError(join_path(path, key), "required key is missing");
    return obj.at(key);
  }

  double number(const json& v, const std::string& path) const {
    if (!v.is_number()) throw ScenarioError(path, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ScenarioError(path, "expected a finite number");
    return d;
  }

  double number_or(const json& obj, const std::string& path, const char* key, double fallback) {
    if (!obj.contains(key)) {
      defaults_.push_back(join_path(path, key) + " = " + number_text(fallback));
      return fallback;
    }
    return number(obj.at(key), join_path(path, key));
  }

  std::int64_t integer(const json& v, const std::string& path) const {
    if (!v.is_number_integer()) throw ScenarioError(path, "expected an integer");
    return v.get<std::int64_t>();
  }

  std::int64_t integer_or(const json& obj, const std::string& path, const char* key, std::int64_t fallback) {
    if (!obj.contains(key)) {
      defaults_.push_back(join_path(path, key) + " = " + std::to_string(fallback));
      return fallback;
    }
    return integer(obj.at(key), join_path(path, key));
  }

  std::string string_or(const json& obj, const std::string& path, const char* key, const std::string& fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_string()) throw ScenarioError(join_path(path, key), "expected a string");
    return v.get<std::string>();
  }

  bool boolean_or(const json& obj, const std::string& path, const char* key, bool fallback) {
    if (!obj.contains(key)) {
      defaults_.push_back(join_path(path, key) + " = " + (fallback ? "true" : "false"));
      return fallback;
    }
    const auto& v = obj.at(key);
    if (!v.is_boolean()) throw ScenarioError(join_path(path, key), "expected true or false");
    return v.get<bool>();
  }

  Vec2 point(const json& v, const std::string& path) const {
    if (!v.is_array() || v.size() != 2) throw ScenarioError(path, "expected [x, y]");
    return {number(v[0], path + "[0]"), number(v[1], path + "[1]")};
  }

  std::vector<Vec2> points(const json& v, const std::string& path) const {
    if (!v.is_array()) throw ScenarioError(path, "expected an array of [x, y] points");
    std::vector<Vec2> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(point(v[i], path + "[" + std::to_string(i) + "]"));
    return out;
  }

  void note_default(const std::string& text) { defaults_.push_back(text); }

 private:
  std::vector<std::string>& defaults_;
};

inline Obstacle read_obstacle(ScenarioReader& r, const json& v, const std::string& path) {
  if (!v.is_object()) throw ScenarioError(path, "expected an object");
  const auto& type = r.required(v, path, "type");
  if (type == "circle") {
    r.reject_unknown(v, path, {"type", "center", "radius"});
    return Circle{r.point(r.required(v, path, "center"), path + ".center"),
                  r.number(r.required(v, path, "radius"), path + ".radius")};
  }
  if (type == "polygon") {
    r.reject_unknown(v, path, {"type", "vertices"});
    return ConvexPolygon{r.points(r.required(v, path, "vertices"), path + ".vertices")};
  }
  throw ScenarioError(path + ".type", "expected \"circle\" or \"polygon\"");
}

inline ControllerParams read_controller(ScenarioReader& r, const json& root) {
  const std::string path = "controller";
  ControllerParams c;
  json obj = json::object();
  if (root.contains(path)) {
    obj = root.at(path);
    r.reject_unknown(obj, path,
                     {"v_f", "C_t", "a_t", "p_t", "R_entrap", "r_arep", "p_arep", "r_trep", "p_trep", "C_d", "r_wall",
                      "a_d", "p_d", "v_limit", "v_shill", "wall_term_variant"});
  }
  c.v_f = r.number_or(obj, path, "v_f", c.v_f);
  c.C_t = r.number_or(obj, path, "C_t", c.C_t);
  c.a_t = r.number_or(obj, path, "a_t", c.a_t);
  c.p_t = r.number_or(obj, path, "p_t", c.p_t);
  c.R_entrap = r.number_or(obj, path, "R_entrap", c.R_entrap);
  c.r_arep = r.number_or(obj, path, "r_arep", c.r_arep);
  c.p_arep = r.number_or(obj, path, "p_arep", c.p_arep);
  c.r_trep = r.number_or(obj, path, "r_trep", c.r_trep);
  c.p_trep = r.number_or(obj, path, "p_trep", c.p_trep);
  c.C_d = r.number_or(obj, path, "C_d", c.C_d);
  c.r_wall = r.number_or(obj, path, "r_wall", c.r_wall);
  c.a_d = r.number_or(obj, path, "a_d", c.a_d);
  c.p_d = r.number_or(obj, path, "p_d", c.p_d);
  c.v_limit = r.number_or(obj, path, "v_limit", c.v_limit);
  // v_shill defaults to the speed limit.
  c.v_shill = r.number_or(obj, path, "v_shill", c.v_limit);
  const std::string variant = r.string_or(obj, path, "wall_term_variant", "literal");
  if (!obj.contains("wall_term_variant")) r.note_default("controller.wall_term_variant = literal");
  if (variant == "literal")
    c.wall_term_variant = WallTermVariant::literal;
  else if (variant == "distance_reversed")
    c.wall_term_variant = WallTermVariant::distance_reversed;
  else
    throw ScenarioError("controller.wall_term_variant", "expected \"literal\" or \"distance_reversed\"");

  if (c.r_trep < c.R_entrap)
    throw ScenarioError("controller.r_trep", "r_trep (" + number_text(c.r_trep) + ") must be >= R_entrap (" +
                                                 number_text(c.R_entrap) + ")");
  if (c.v_f > c.v_limit)
    throw ScenarioError("controller.v_f", "v_f (" + number_text(c.v_f) + ") must be <= v_limit (" +
                                              number_text(c.v_limit) + ")");
  if (c.v_shill > c.v_limit)
    throw ScenarioError("controller.v_shill", "v_shill (" + number_text(c.v_shill) + ") must be <= v_limit (" +
                                                  number_text(c.v_limit) + ")");
  try {
    c.validate();
  } catch (const ArgumentError& e) {
    const std::string msg = e.what();
    throw ScenarioError("controller." + msg.substr(0, msg.find(' ')), msg);
  }
  return c;
}

}  // namespace detail

/// Builds a validated Scenario from parsed JSON.
inline LoadedScenario scenario_from_json(const nlohmann::json& root) {
  using detail::ScenarioReader;
  using nlohmann::json;
  LoadedScenario out;
  ScenarioReader r(out.defaults_applied);
  Scenario& s = out.scenario;

  r.reject_unknown(root, "",
                   {"schema_version", "name", "description", "arena", "obstacles", "agents", "targets", "controller",
                    "decision", "levy", "steps", "seed", "metrics", "baseline"});

  const auto version = r.integer(r.required(root, "", "schema_version"), "schema_version");
  if (version != kScenarioSchemaVersion)
    throw ScenarioError("schema_version", "unsupported version " + std::to_string(version));
  s.name = r.string_or(root, "", "name", "");
  s.description = r.string_or(root, "", "description", "");

  const auto& arena = r.required(root, "", "arena");
  r.reject_unknown(arena, "arena", {"side"});
  s.arena.side = r.number(r.required(arena, "arena", "side"), "arena.side");
  if (s.arena.side <= 0.0) throw ScenarioError("arena.side", "must be positive");

  if (root.contains("obstacles")) {
    const auto& obs = root.at("obstacles");
    if (!obs.is_array()) throw ScenarioError("obstacles", "expected an array");
    for (std::size_t i = 0; i < obs.size(); ++i) {
      const std::string path = "obstacles[" + std::to_string(i) + "]";
      Obstacle o = detail::read_obstacle(r, obs[i], path);
      try {
        validate(o);
      } catch (const ArgumentError& e) {
        throw ScenarioError(path, e.what());
      }
      if (!inside_arena(s.arena, o)) throw ScenarioError(path, "obstacle must lie fully inside the arena");
      for (std::size_t j = 0; j < s.obstacles.size(); ++j)
        if (overlap(o, s.obstacles[j]))
          throw ScenarioError(path, "overlaps obstacles[" + std::to_string(j) + "]");
      s.obstacles.push_back(std::move(o));
    }
  }

  const auto& agents = r.required(root, "", "agents");
  r.reject_unknown(agents, "agents", {"spawn", "positions"});
  if (agents.contains("positions") == agents.contains("spawn"))
    throw ScenarioError("agents", "give exactly one of \"positions\" or \"spawn\"");
  if (agents.contains("positions")) {
    auto pos = r.points(agents.at("positions"), "agents.positions");
    if (pos.empty()) throw ScenarioError("agents.positions", "at least one agent is required");
    for (std::size_t i = 0; i < pos.size(); ++i) {
      const std::string path = "agents.positions[" + std::to_string(i) + "]";
      if (!s.arena.contains(pos[i])) throw ScenarioError(path, "must lie strictly inside the arena");
      if (inside_any(s.obstacles, pos[i])) throw ScenarioError(path, "lies inside an obstacle");
    }
    s.agents = std::move(pos);
  } else {
    const auto& sp = agents.at("spawn");
    r.reject_unknown(sp, "agents.spawn", {"count", "lower", "upper", "min_separation"});
    AgentSpawn spawn;
    const auto count = r.integer(r.required(sp, "agents.spawn", "count"), "agents.spawn.count");
    if (count < 1) throw ScenarioError("agents.spawn.count", "at least one agent is required");
    spawn.count = static_cast<std::size_t>(count);
    if (sp.contains("lower")) {
      spawn.lower = r.point(sp.at("lower"), "agents.spawn.lower");
    } else {
      spawn.lower = {0.0, 0.0};
      r.note_default("agents.spawn.lower = [0, 0]");
    }
    if (sp.contains("upper")) {
      spawn.upper = r.point(sp.at("upper"), "agents.spawn.upper");
    } else {
      spawn.upper = {s.arena.side / 2.0, s.arena.side / 2.0};
      r.note_default("agents.spawn.upper = [" + detail::number_text(spawn.upper.x) + ", " +
                     detail::number_text(spawn.upper.y) + "]");
    }
    spawn.min_separation = r.number_or(sp, "agents.spawn", "min_separation", spawn.min_separation);
    if (!(spawn.lower.x < spawn.upper.x && spawn.lower.y < spawn.upper.y))
      throw ScenarioError("agents.spawn", "lower must be strictly below upper in both axes");
    if (spawn.min_separation < 0.0) throw ScenarioError("agents.spawn.min_separation", "must be non-negative");
    s.agents = spawn;
  }

  const auto& targets = r.required(root, "", "targets");
  r.reject_unknown(targets, "targets", {"speed", "positions"});
  s.targets = r.points(r.required(targets, "targets", "positions"), "targets.positions");
  if (s.targets.empty()) throw ScenarioError("targets.positions", "at least one target is required");
  for (std::size_t i = 0; i < s.targets.size(); ++i) {
    const std::string path = "targets.positions[" + std::to_string(i) + "]";
    if (!s.arena.contains(s.targets[i])) throw ScenarioError(path, "must lie strictly inside the arena");
    if (inside_any(s.obstacles, s.targets[i])) throw ScenarioError(path, "target starts inside an obstacle");
  }
  s.target_speed = r.number_or(targets, "targets", "speed", s.target_speed);
  if (s.target_speed < 0.0) throw ScenarioError("targets.speed", "must be non-negative");

  s.controller = detail::read_controller(r, root);

  {
    json obj = root.contains("decision") ? root.at("decision") : json::object();
    r.reject_unknown(obj, "decision", {"a", "b", "hysteresis", "extra"});
    s.decision.a = r.number_or(obj, "decision", "a", s.decision.a);
    s.decision.b = r.number_or(obj, "decision", "b", s.decision.b);
    s.hysteresis = r.number_or(obj, "decision", "hysteresis", s.hysteresis);
    if (s.decision.a <= 0.0) throw ScenarioError("decision.a", "must be positive");
    if (s.decision.b < 0.0) throw ScenarioError("decision.b", "must be non-negative");
    if (s.hysteresis < 0.0) throw ScenarioError("decision.hysteresis", "must be non-negative");
    if (obj.contains("extra")) {
      const auto& extra = obj.at("extra");
      if (!extra.is_array()) throw ScenarioError("decision.extra", "expected an array");
      for (std::size_t i = 0; i < extra.size(); ++i) {
        const std::string path = "decision.extra[" + std::to_string(i) + "]";
        r.reject_unknown(extra[i], path, {"name", "weight", "values"});
        ExtraFactor f;
        f.name = r.string_or(extra[i], path, "name", "factor" + std::to_string(i));
        f.weight = r.number(r.required(extra[i], path, "weight"), path + ".weight");
        const auto& values = r.required(extra[i], path, "values");
        if (!values.is_array()) throw ScenarioError(path + ".values", "expected an array of numbers");
        for (std::size_t k = 0; k < values.size(); ++k)
          f.values.push_back(r.number(values[k], path + ".values[" + std::to_string(k) + "]"));
        if (f.values.size() != s.targets.size())
          throw ScenarioError(path + ".values", "needs one value per target (" + std::to_string(s.targets.size()) + ")");
        s.decision.extra.push_back(std::move(f));
      }
    } else {
      s.decision.extra.push_back({"priority", 0.0, std::vector<double>(s.targets.size(), 0.0)});
      r.note_default("decision.extra = [priority, weight 0, all targets 0]");
    }
  }

  {
    json obj = root.contains("levy") ? root.at("levy") : json::object();
    r.reject_unknown(obj, "levy", {"alpha", "min_step", "max_step"});
    s.levy.alpha = r.number_or(obj, "levy", "alpha", s.levy.alpha);
    s.levy.min_step = r.number_or(obj, "levy", "min_step", s.levy.min_step);
    s.levy.max_step = r.number_or(obj, "levy", "max_step", s.levy.max_step);
    try {
      s.levy.validate();
    } catch (const ArgumentError& e) {
      throw ScenarioError("levy", e.what());
    }
  }

  s.steps = r.integer_or(root, "", "steps", s.steps);
  if (s.steps < 0) throw ScenarioError("steps", "must be non-negative");
  if (root.contains("seed")) {
    const auto& seed = root.at("seed");
    if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<std::int64_t>() >= 0))
      throw ScenarioError("seed", "expected a non-negative integer");
    s.seed = seed.get<std::uint64_t>();
  } else {
    r.note_default("seed = " + std::to_string(s.seed));
  }

  {
    json obj = root.contains("metrics") ? root.at("metrics") : json::object();
    r.reject_unknown(obj, "metrics", {"sector_radius", "sector_count", "sample_interval"});
    s.sector_radius = r.number_or(obj, "metrics", "sector_radius", s.sector_radius);
    const auto sectors = r.integer_or(obj, "metrics", "sector_count", static_cast<std::int64_t>(s.sector_count));
    s.sample_interval = r.integer_or(obj, "metrics", "sample_interval", s.sample_interval);
    if (s.sector_radius <= 0.0) throw ScenarioError("metrics.sector_radius", "must be positive");
    if (sectors < 1) throw ScenarioError("metrics.sector_count", "must be at least 1");
    if (s.sample_interval < 1) throw ScenarioError("metrics.sample_interval", "must be at least 1");
    s.sector_count = static_cast<std::size_t>(sectors);
  }

  s.baseline = r.boolean_or(root, "", "baseline", false);
  return out;
}

inline LoadedScenario parse_scenario_text(const std::string& text) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ScenarioError("", "syntax error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  return scenario_from_json(root);
}

inline LoadedScenario parse_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError("", "cannot read scenario file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str());
}

/// Canonical JSON form with every field explicit.
inline nlohmann::json scenario_to_json(const Scenario& s) {
  using nlohmann::json;
  auto pt = [](Vec2 p) { return json::array({p.x, p.y}); };
  auto pts = [&](const std::vector<Vec2>& v) {
    json a = json::array();
    for (Vec2 p : v) a.push_back(pt(p));
    return a;
  };

  json root;
  root["schema_version"] = kScenarioSchemaVersion;
  root["name"] = s.name;
  root["description"] = s.description;
  root["arena"] = {{"side", s.arena.side}};

  json obstacles = json::array();
  for (const auto& o : s.obstacles) {
    if (const auto* c = std::get_if<Circle>(&o))
      obstacles.push_back({{"type", "circle"}, {"center", pt(c->center)}, {"radius", c->radius}});
    else
      obstacles.push_back({{"type", "polygon"}, {"vertices", pts(std::get<ConvexPolygon>(o).vertices)}});
  }
  root["obstacles"] = obstacles;

  if (const auto* spawn = std::get_if<AgentSpawn>(&s.agents)) {
    root["agents"] = {{"spawn",
                       {{"count", spawn->count},
                        {"lower", pt(spawn->lower)},
                        {"upper", pt(spawn->upper)},
                        {"min_separation", spawn->min_separation}}}};
  } else {
    root["agents"] = {{"positions", pts(std::get<std::vector<Vec2>>(s.agents))}};
  }
  root["targets"] = {{"speed", s.target_speed}, {"positions", pts(s.targets)}};

  const auto& c = s.controller;
  root["controller"] = {{"v_f", c.v_f},
                        {"C_t", c.C_t},
                        {"a_t", c.a_t},
                        {"p_t", c.p_t},
                        {"R_entrap", c.R_entrap},
                        {"r_arep", c.r_arep},
                        {"p_arep", c.p_arep},
                        {"r_trep", c.r_trep},
                        {"p_trep", c.p_trep},
                        {"C_d", c.C_d},
                        {"r_wall", c.r_wall},
                        {"a_d", c.a_d},
                        {"p_d", c.p_d},
                        {"v_limit", c.v_limit},
                        {"v_shill", c.v_shill},
                        {"wall_term_variant", std::string(to_string(c.wall_term_variant))}};

  json extra = json::array();
  for (const auto& f : s.decision.extra) extra.push_back({{"name", f.name}, {"weight", f.weight}, {"values", f.values}});
  root["decision"] = {{"a", s.decision.a}, {"b", s.decision.b}, {"hysteresis", s.hysteresis}, {"extra", extra}};
  root["levy"] = {{"alpha", s.levy.alpha}, {"min_step", s.levy.min_step}, {"max_step", s.levy.max_step}};
  root["steps"] = s.steps;
  root["seed"] = s.seed;
  root["metrics"] = {
      {"sector_radius", s.sector_radius}, {"sector_count", s.sector_count}, {"sample_interval", s.sample_interval}};
  root["baseline"] = s.baseline;
  return root;
}

}  // namespace swarm_entrap
