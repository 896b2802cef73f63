// sweepot command line: exact-OT sweep planning, height-map simulation and
// the experiment harness. Exit codes: 0 success, 2 config/parse error,
// 3 runtime error.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "sweepot/grid_io.hpp"
#include "sweepot/harness.hpp"
#include "sweepot/text.hpp"

namespace {

using namespace sweepot;

struct Overrides {
  PlannerConfig planner;
  SimConfig sim;
};

Overrides load_overrides(const std::string& path) {
  Overrides overrides;
  if (path.empty()) return overrides;
  const KeyValueConfig config = KeyValueConfig::parse_file(path);
  apply_planner_overrides(config, overrides.planner);
  apply_sim_overrides(config, overrides.sim);
  config.reject_unknown_keys();
  overrides.planner.validate();
  overrides.sim.validate();
  return overrides;
}

int cmd_emd(const std::string& path_a, const std::string& path_b, double p) {
  const HeightMap a = load_grid(path_a);
  const HeightMap b = load_grid(path_b);
  std::cout << format_double(emd(normalize(a), normalize(b), p)) << "\n";
  return 0;
}

int cmd_plan(const std::string& source_path, const std::string& target_path,
             const std::string& method_name, std::uint64_t seed, const std::string& config_path) {
  const HeightMap source = load_grid(source_path);
  const HeightMap target = load_grid(target_path);
  Overrides overrides = load_overrides(config_path);
  overrides.planner.seed = seed;
  Rng rng(seed);

  std::optional<SweepAction> action;
  switch (parse_method(method_name)) {
    case Method::Ours:
      action = next_best_sweep(source, target, overrides.planner, rng);
      break;
    case Method::MaxOt:
      try {
        action = baseline_max_ot(source, target, overrides.planner);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NoNonTrivialEdge) throw;
      }
      break;
    case Method::DiffMap:
      try {
        action = baseline_diff_map(source, target, overrides.planner, rng);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::Converged && e.code() != ErrorCode::SamplingExhausted) throw;
      }
      break;
  }
  if (!action.has_value()) {
    std::cerr << "no action needed (shapes already match)\n";
    return 0;
  }
  std::cout << format_double(action->start.x) << ',' << format_double(action->start.y) << ','
            << format_double(action->end.x) << ',' << format_double(action->end.y) << ','
            << format_double(action->spatula_width) << "\n";
  return 0;
}

int cmd_simulate(const std::string& source_path, const std::string& sweep_text,
                 const std::string& config_path, double width, const std::string& out_path) {
  const HeightMap source = load_grid(source_path);
  const Overrides overrides = load_overrides(config_path);

  double coords[4];
  std::size_t pos = 0;
  std::string_view text(sweep_text);
  for (int k = 0; k < 4; ++k) {
    const std::size_t comma = text.find(',', pos);
    const std::string_view token =
        text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    if (!parse_double(token, coords[k]) || (k < 3 && comma == std::string_view::npos))
      fail(ErrorCode::ConfigError, "--sweep expects x0,y0,x1,y1");
    pos = comma + 1;
  }
  const SweepAction action{{coords[0], coords[1]}, {coords[2], coords[3]}, width};
  const SweepOutcome outcome = apply_sweep(source, action, overrides.sim);
  if (outcome.degenerate) std::cerr << "warning: sweep covered no cells; grid unchanged\n";
  save_grid(outcome.map, out_path);
  std::cout << out_path << "\n";
  return 0;
}

int cmd_episode(const std::string& config_path, const std::string& out_dir) {
  const TaskSpec spec = load_task_config(config_path);
  const EpisodeRecord record = run_episode(spec, /*keep_steps=*/false);
  std::filesystem::create_directories(out_dir);
  {
    std::ofstream out(out_dir + "/metrics.csv", std::ios::binary);
    if (!out.is_open()) fail(ErrorCode::ConfigError, out_dir + "/metrics.csv: cannot write");
    write_metrics_csv({record.metrics}, out);
  }
  save_grid(record.final_map, out_dir + "/final.grid");
  std::cout << record.metrics.episode_id << ": " << record.actions_taken << " sweeps, final EMD "
            << format_double(record.metrics.records.back().emd_m) << " m"
            << (record.converged ? " (converged)" : "") << "\n";
  return 0;
}

int cmd_experiment(const std::string& config_path, const std::string& out_dir, int workers) {
  ExperimentConfig config = load_experiment_config(config_path);
  if (workers > 0) config.workers = workers;
  const ExperimentResult result = run_experiment(config);
  write_experiment_outputs(result, out_dir);
  std::cout << result.episodes.size() << " episodes -> " << out_dir << "\n"
            << format_experiment_summary(result);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"straight-line sweep planning for granular material via exact optimal transport"};
  app.require_subcommand(1);

  std::string grid_a, grid_b;
  double p = 1.0;
  CLI::App* emd_cmd = app.add_subcommand("emd", "earth mover's distance between two grid files");
  emd_cmd->add_option("grid-a", grid_a)->required();
  emd_cmd->add_option("grid-b", grid_b)->required();
  emd_cmd->add_option("--p", p, "Wasserstein exponent (>= 1)");

  std::string source_path, target_path, method = "ours", config_path;
  std::uint64_t seed = 0;
  CLI::App* plan_cmd = app.add_subcommand("plan", "print the next-best sweep for source -> target");
  plan_cmd->add_option("source-grid", source_path)->required();
  plan_cmd->add_option("target-grid", target_path)->required();
  plan_cmd->add_option("--method", method)->check(CLI::IsMember({"ours", "max_ot", "diff_map"}));
  plan_cmd->add_option("--seed", seed);
  plan_cmd->add_option("--config", config_path, "planner.*/sim.* key-value overrides");

  std::string sim_source, sweep_text, sim_out = "swept.grid";
  double width = 0.07;
  std::string sim_config;
  CLI::App* sim_cmd = app.add_subcommand("simulate", "apply one sweep to a grid file");
  sim_cmd->add_option("source-grid", sim_source)->required();
  sim_cmd->add_option("--sweep", sweep_text, "x0,y0,x1,y1 in meters")->required();
  sim_cmd->add_option("--width", width, "spatula width in meters");
  sim_cmd->add_option("--config", sim_config, "planner.*/sim.* key-value overrides");
  sim_cmd->add_option("--out", sim_out, "output grid path");

  std::string episode_config, episode_out;
  CLI::App* episode_cmd = app.add_subcommand("episode", "run one closed-loop episode");
  episode_cmd->add_option("task-config", episode_config)->required();
  episode_cmd->add_option("--out", episode_out)->required();

  std::string experiment_config, experiment_out;
  int workers = 0;
  CLI::App* experiment_cmd =
      app.add_subcommand("experiment", "run a method x task x source batch");
  experiment_cmd->add_option("grid-config", experiment_config)->required();
  experiment_cmd->add_option("--out", experiment_out)->required();
  experiment_cmd->add_option("--workers", workers, "parallel episodes (overrides config)");

  try {
    app.parse(argc, argv);
    if (emd_cmd->parsed()) return cmd_emd(grid_a, grid_b, p);
    if (plan_cmd->parsed()) return cmd_plan(source_path, target_path, method, seed, config_path);
    if (sim_cmd->parsed()) return cmd_simulate(sim_source, sweep_text, sim_config, width, sim_out);
    if (episode_cmd->parsed()) return cmd_episode(episode_config, episode_out);
    if (experiment_cmd->parsed()) return cmd_experiment(experiment_config, experiment_out, workers);
    return 0;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const sweepot::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return (e.code() == ErrorCode::ConfigError || e.code() == ErrorCode::ParseError) ? 2 : 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
