#pragma once

// The three CLI commands. Each returns a process exit code and writes
// diagnostics to `err` only.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "swarm_entrap/digest.hpp"
#include "swarm_entrap/errors.hpp"
#include "swarm_entrap/metrics.hpp"
#include "swarm_entrap/report_io.hpp"
#include "swarm_entrap/scenario_io.hpp"
#include "swarm_entrap/simulator.hpp"
#include "swarm_entrap/svg.hpp"
#include "swarm_entrap/trajectory_io.hpp"

namespace swarm_entrap {

inline constexpr const char* kEngineVersion = "1.0.0";

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitScenario = 2, kExitRuntime = 3 };

struct RunOptions {
  std::filesystem::path scenario;
  std::filesystem::path out = "out";
  std::optional<std::uint64_t> seed;
  std::int64_t seeds = 1;
  std::optional<std::int64_t> steps;
  bool baseline = false;
};

/// Files written for one replicate.
struct ReplicateFiles {
  std::filesystem::path dir;
  std::string trajectory_csv;
  std::string metrics_json;
  std::string run_json;
  std::string run_log;
};

/// Worker count: SWARM_ENTRAP_THREADS if set and positive, else the hardware count.
inline unsigned worker_count(std::size_t jobs) {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("SWARM_ENTRAP_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) n = static_cast<unsigned>(v);
  }
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(1, jobs)));
}

inline std::string replicate_dir_name(std::uint64_t seed) { return "seed_" + std::to_string(seed); }

/// Runs one fully configured scenario and renders every output file in memory.
inline ReplicateFiles run_replicate(const Scenario& s, const std::vector<std::string>& defaults_applied) {
  const auto scenario_json = scenario_to_json(s);
  const std::string scenario_text = scenario_json.dump();
  const Trajectory traj = run(s);
  const MetricsReport report = compute_metrics(traj, s);

  ReplicateFiles files;
  files.trajectory_csv = trajectory_csv(traj);
  files.metrics_json = metrics_json_text(report);

  nlohmann::ordered_json record;
  record["engine_version"] = kEngineVersion;
  record["scenario_sha256"] = sha256_hex(scenario_text);
  record["seed"] = s.seed;
  record["steps"] = s.steps;
  record["baseline"] = s.baseline;
  record["trajectory"] = "trajectory.csv";
  record["trajectory_sha256"] = sha256_hex(files.trajectory_csv);
  record["metrics"] = "metrics.json";
  record["metrics_sha256"] = sha256_hex(files.metrics_json);
  record["summary"] = {{"entrap_time_first", detail::optional_json(report.entrap_time_first)},
                       {"entrap_time_all", detail::optional_json(report.entrap_time_all)},
                       {"mean_velocity_correlation", report.mean_velocity_correlation},
                       {"run_min_pairwise_distance", detail::finite_or_null(report.run_min_pairwise_distance)},
                       {"collision_events", report.collision_events},
                       {"arena_escapes", report.arena_escapes}};
  record["scenario"] = nlohmann::ordered_json::parse(scenario_text);
  files.run_json = record.dump(2) + "\n";

  std::string log = "engine " + std::string(kEngineVersion) + "\n";
  log += "scenario " + (s.name.empty() ? std::string("(unnamed)") : s.name) + " sha256 " +
         record["scenario_sha256"].get<std::string>() + "\n";
  log += "seed " + std::to_string(s.seed) + " steps " + std::to_string(s.steps) +
         (s.baseline ? " decision baseline\n" : " decision adaptive\n");
  for (const auto& d : defaults_applied) log += "default " + d + "\n";
  log += "entrap_time_all " +
         (report.entrap_time_all ? std::to_string(*report.entrap_time_all) : std::string("never")) + "\n";
  files.run_log = log;
  return files;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

inline int cmd_run(const RunOptions& opt, std::ostream& err) {
  LoadedScenario loaded;
  try {
    loaded = parse_scenario(opt.scenario);
  } catch (const ScenarioError& e) {
    err << "error: " << opt.scenario.string() << ": " << e.what() << '\n';
    return kExitScenario;
  }
  if (opt.seeds < 1) {
    err << "error: --seeds must be at least 1\n";
    return kExitUsage;
  }
  if (opt.steps && *opt.steps < 0) {
    err << "error: --steps must be non-negative\n";
    return kExitUsage;
  }
  Scenario base = loaded.scenario;
  if (opt.seed) base.seed = *opt.seed;
  if (opt.steps) base.steps = *opt.steps;
  if (opt.baseline) base.baseline = true;

  std::error_code ec;
  std::filesystem::create_directories(opt.out, ec);
  if (ec) {
    err << "error: cannot create " << opt.out.string() << ": " << ec.message() << '\n';
    return kExitRuntime;
  }

  const auto n = static_cast<std::size_t>(opt.seeds);
  std::vector<int> status(n, kExitOk);
  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      Scenario s = base;
      s.seed = base.seed + i;
      const auto dir = opt.out / replicate_dir_name(s.seed);
      try {
        auto files = run_replicate(s, loaded.defaults_applied);
        std::filesystem::create_directories(dir);
        write_text(dir / "trajectory.csv", files.trajectory_csv);
        write_text(dir / "metrics.json", files.metrics_json);
        write_text(dir / "run.json", files.run_json);
        write_text(dir / "run.log", files.run_log);
        std::lock_guard lock(err_mutex);
        err << "seed " << s.seed << ": wrote " << dir.string() << '\n';
      } catch (const ScenarioError& e) {
        std::lock_guard lock(err_mutex);
        err << "error: seed " << s.seed << ": " << e.what() << '\n';
        status[i] = kExitScenario;
      } catch (const std::exception& e) {
        std::lock_guard lock(err_mutex);
        err << "error: seed " << s.seed << ": " << e.what() << '\n';
        status[i] = kExitRuntime;
      }
    }
  };
  const unsigned workers = worker_count(n);
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return *std::max_element(status.begin(), status.end());
}

/// Recomputes metrics.json from a stored trajectory. The scenario comes from
/// `scenario_path` when given, else from the run.json next to the trajectory.
/// The report is written to `out_path` or, if empty, to `out`.
inline int cmd_metrics(const std::filesystem::path& trajectory_path,
                       const std::optional<std::filesystem::path>& scenario_path,
                       const std::optional<std::filesystem::path>& out_path, std::ostream& out, std::ostream& err) {
  const auto record_path = trajectory_path.parent_path() / "run.json";
  std::optional<nlohmann::json> record;
  try {
    if (std::filesystem::exists(record_path)) record = nlohmann::json::parse(read_file(record_path));
  } catch (const std::exception& e) {
    err << "warning: ignoring unreadable " << record_path.string() << ": " << e.what() << '\n';
  }

  Scenario s;
  try {
    if (scenario_path) {
      s = parse_scenario(*scenario_path).scenario;
    } else if (record && record->contains("scenario")) {
      s = scenario_from_json(record->at("scenario")).scenario;
    } else {
      err << "error: no scenario given and no run.json next to the trajectory\n";
      return kExitUsage;
    }
  } catch (const ScenarioError& e) {
    err << "error: scenario: " << e.what() << '\n';
    return kExitScenario;
  }

  std::string text;
  try {
    text = read_file(trajectory_path);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  if (record && record->contains("trajectory_sha256") &&
      record->at("trajectory_sha256").get<std::string>() != sha256_hex(text))
    err << "warning: trajectory digest does not match " << record_path.string() << '\n';

  try {
    std::istringstream in(text);
    const Trajectory traj = read_trajectory_csv(in);
    if (traj.frames.empty()) {
      err << "error: trajectory is empty\n";
      return kExitRuntime;
    }
    const std::string json = metrics_json_text(compute_metrics(traj, s));
    if (out_path)
      write_text(*out_path, json);
    else
      out << json;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

inline std::vector<double> as_doubles(const std::vector<std::int64_t>& v) { return {v.begin(), v.end()}; }

/// Writes the five standard plots into `out_dir` and returns their paths.
inline std::vector<std::filesystem::path> render_plots(const Trajectory& traj, const MetricsReport& r,
                                                       const Arena& arena, const std::vector<Obstacle>& obstacles,
                                                       const std::filesystem::path& out_dir) {
  if (traj.frames.empty()) throw ArgumentError("cannot plot an empty trajectory");
  std::filesystem::create_directories(out_dir);
  std::vector<std::filesystem::path> written;
  auto emit = [&](const char* name, const std::string& doc) {
    write_text(out_dir / name, doc);
    written.push_back(out_dir / name);
  };

  emit("trajectory.svg", svg::trajectory_overview("Agent and target paths", arena, obstacles, traj));

  const auto steps = as_doubles(r.sample_steps);
  const std::size_t n_targets = traj.frames.front().targets.size();
  std::vector<svg::Series> per_target;
  for (std::size_t k = 0; k < n_targets; ++k) {
    svg::Series s{"target " + std::to_string(k), steps, {}};
    for (const auto& row : r.agents_per_target) s.y.push_back(static_cast<double>(row[k]));
    per_target.push_back(std::move(s));
  }
  emit("agents_per_target.svg", svg::line_chart("Agents assigned per target", "step", "agents", per_target));

  std::vector<std::string> sector_labels;
  const std::size_t sectors = r.sector_occupancy.empty() || r.sector_occupancy.front().empty()
                                  ? 0
                                  : r.sector_occupancy.front().front().size();
  for (std::size_t b = 0; b < sectors; ++b) sector_labels.push_back("S" + std::to_string(b));
  std::vector<std::pair<std::string, std::vector<double>>> groups;
  for (std::size_t k = 0; k < n_targets; ++k) {
    std::vector<double> mean(sectors, 0.0);
    for (const auto& sample : r.sector_occupancy)
      for (std::size_t b = 0; b < sectors; ++b) mean[b] += static_cast<double>(sample[k][b]);
    for (double& m : mean) m /= std::max<double>(1.0, static_cast<double>(r.sector_occupancy.size()));
    groups.emplace_back("target " + std::to_string(k), std::move(mean));
  }
  emit("sector_occupancy.svg",
       svg::bar_chart("Mean agents per sector", "sector", "mean agents", sector_labels, groups));

  emit("min_distance.svg", svg::line_chart("Minimum pairwise agent distance", "step", "distance (m)",
                                           {{"min distance", steps, r.min_pairwise_distance}}));

  std::vector<svg::Series> corr;
  const auto corr_steps = as_doubles(r.velocity_correlation_steps);
  for (std::size_t i = 0; i < r.velocity_correlation.size(); ++i)
    corr.push_back({"agent " + std::to_string(i), corr_steps, r.velocity_correlation[i]});
  emit("velocity_correlation.svg", svg::line_chart("Velocity correlation", "step", "cosine", corr));
  return written;
}

/// Renders plots for a stored run. Arena and obstacles come from `scenario_path`
/// when given, else from the run.json next to the trajectory.
inline int cmd_plot(const std::filesystem::path& trajectory_path, const std::filesystem::path& metrics_path,
                    const std::filesystem::path& out_dir, const std::optional<std::filesystem::path>& scenario_path,
                    std::ostream& err) {
  Scenario s;
  try {
    const auto record_path = trajectory_path.parent_path() / "run.json";
    if (scenario_path)
      s = parse_scenario(*scenario_path).scenario;
    else if (std::filesystem::exists(record_path))
      s = scenario_from_json(nlohmann::json::parse(read_file(record_path)).at("scenario")).scenario;
    else
      err << "warning: no scenario available; drawing a default arena without obstacles\n";
  } catch (const ScenarioError& e) {
    err << "error: scenario: " << e.what() << '\n';
    return kExitScenario;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }

  try {
    const Trajectory traj = read_trajectory_csv(trajectory_path);
    if (traj.frames.empty()) {
      err << "error: trajectory is empty\n";
      return kExitRuntime;
    }
    const MetricsReport r = metrics_from_json(nlohmann::ordered_json::parse(read_file(metrics_path)));
    for (const auto& p : render_plots(traj, r, s.arena, s.obstacles, out_dir)) err << "wrote " << p.string() << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace swarm_entrap
