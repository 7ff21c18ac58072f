#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "swarm_entrap/commands.hpp"

namespace se = swarm_entrap;

int main(int argc, char** argv) {
  CLI::App app{"Multi-target swarm entrapment simulator"};
  app.require_subcommand(1);

  se::RunOptions run_opt;
  std::string scenario;
  std::string out = "out";
  std::uint64_t seed = 0;
  std::int64_t steps = 0;
  auto* run = app.add_subcommand("run", "Simulate a scenario and write trajectory, metrics and run records");
  run->add_option("scenario", scenario, "Scenario JSON file")->required();
  run->add_option("--seeds", run_opt.seeds, "Number of replicates (seeds base..base+N-1)")->default_val(1);
  auto* seed_opt = run->add_option("--seed", seed, "Base seed, overrides the scenario");
  auto* steps_opt = run->add_option("--steps", steps, "Step count, overrides the scenario");
  run->add_option("--out", out, "Output directory")->default_val("out");
  run->add_flag("--baseline", run_opt.baseline, "Nearest-target decisions (b = 0, no hysteresis)");

  std::string trajectory;
  std::string metrics_scenario;
  std::string metrics_out;
  auto* metrics = app.add_subcommand("metrics", "Recompute metrics JSON from a stored trajectory");
  metrics->add_option("trajectory", trajectory, "trajectory.csv")->required();
  metrics->add_option("scenario", metrics_scenario, "Scenario JSON (default: run.json next to the trajectory)");
  metrics->add_option("--out", metrics_out, "Write the report to this file instead of stdout");

  std::string plot_trajectory;
  std::string plot_metrics;
  std::string plot_out = "plots";
  std::string plot_scenario;
  auto* plot = app.add_subcommand("plot", "Render SVG plots for a stored run");
  plot->add_option("trajectory", plot_trajectory, "trajectory.csv")->required();
  plot->add_option("metrics", plot_metrics, "metrics.json")->required();
  plot->add_option("--out", plot_out, "Output directory")->default_val("plots");
  plot->add_option("--scenario", plot_scenario, "Scenario JSON (default: run.json next to the trajectory)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e, std::cerr, std::cerr);
    return se::kExitUsage;
  }

  if (*run) {
    run_opt.scenario = scenario;
    run_opt.out = out;
    if (*seed_opt) run_opt.seed = seed;
    if (*steps_opt) run_opt.steps = steps;
    return se::cmd_run(run_opt, std::cerr);
  }
  if (*metrics) {
    std::optional<std::filesystem::path> scen, dest;
    if (!metrics_scenario.empty()) scen = metrics_scenario;
    if (!metrics_out.empty()) dest = metrics_out;
    return se::cmd_metrics(trajectory, scen, dest, std::cout, std::cerr);
  }
  std::optional<std::filesystem::path> scen;
  if (!plot_scenario.empty()) scen = plot_scenario;
  return se::cmd_plot(plot_trajectory, plot_metrics, plot_out, scen, std::cerr);
}
