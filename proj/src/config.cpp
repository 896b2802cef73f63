#include <cctype>
#include <fstream>
#include <sstream>

#include "sweepot/harness.hpp"
#include "sweepot/text.hpp"

namespace sweepot {
namespace {

std::string trim(const std::string& text) {
  std::size_t first = 0, last = text.size();
  while (first < last && std::isspace(static_cast<unsigned char>(text[first]))) ++first;
  while (last > first && std::isspace(static_cast<unsigned char>(text[last - 1]))) --last;
  return text.substr(first, last - first);
}

}  // namespace

KeyValueConfig KeyValueConfig::parse_string(const std::string& text, const std::string& name) {
  KeyValueConfig config;
  config.name_ = name;
  std::istringstream in(text);
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string trimmed = trim(line);
    if (trimmed.empty()) continue;
    const std::size_t eq = trimmed.find('=');
    if (eq == std::string::npos)
      fail(ErrorCode::ConfigError,
           name + ":" + std::to_string(line_number) + ": expected `key = value`");
    const std::string key = trim(trimmed.substr(0, eq));
    const std::string value = trim(trimmed.substr(eq + 1));
    if (key.empty())
      fail(ErrorCode::ConfigError, name + ":" + std::to_string(line_number) + ": empty key");
    if (config.values_.count(key))
      fail(ErrorCode::ConfigError,
           name + ":" + std::to_string(line_number) + ": duplicate key '" + key + "'");
    config.values_[key] = value;
    config.consumed_[key] = false;
  }
  return config;
}

KeyValueConfig KeyValueConfig::parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.is_open()) fail(ErrorCode::ConfigError, path + ": cannot open config file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_string(buffer.str(), path);
}

bool KeyValueConfig::has(const std::string& key) const { return values_.count(key) != 0; }

std::string KeyValueConfig::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  consumed_[key] = true;
  return it->second;
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  consumed_[key] = true;
  double value = 0.0;
  if (!parse_double(it->second, value))
    fail(ErrorCode::ConfigError, name_ + ": field '" + key + "': not a number");
  return value;
}

int KeyValueConfig::get_int(const std::string& key, int fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  consumed_[key] = true;
  int value = 0;
  if (!parse_int(it->second, value))
    fail(ErrorCode::ConfigError, name_ + ": field '" + key + "': not an integer");
  return value;
}

std::uint64_t KeyValueConfig::get_seed(const std::string& key, std::uint64_t fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  consumed_[key] = true;
  std::uint64_t value = 0;
  const std::string& text = it->second;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    fail(ErrorCode::ConfigError, name_ + ": field '" + key + "': not an unsigned integer");
  return value;
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  consumed_[key] = true;
  if (it->second == "true" || it->second == "1") return true;
  if (it->second == "false" || it->second == "0") return false;
  fail(ErrorCode::ConfigError, name_ + ": field '" + key + "': expected true/false");
}

void KeyValueConfig::reject_unknown_keys() const {
  for (const auto& [key, consumed] : consumed_)
    if (!consumed)
      fail(ErrorCode::ConfigError, name_ + ": unknown field '" + key + "'");
}

void apply_planner_overrides(const KeyValueConfig& config, PlannerConfig& planner) {
  planner.alpha_plus = config.get_double("planner.alpha_plus", planner.alpha_plus);
  planner.alpha_minus = config.get_double("planner.alpha_minus", planner.alpha_minus);
  planner.num_samples = config.get_int("planner.num_samples", planner.num_samples);
  planner.delta_refine = config.get_double("planner.delta_refine", planner.delta_refine);
  planner.delta_min = config.get_double("planner.delta_min", planner.delta_min);
  planner.spatula_width = config.get_double("planner.spatula_width", planner.spatula_width);
  planner.convergence_emd = config.get_double("planner.convergence_emd", planner.convergence_emd);
}

void apply_sim_overrides(const KeyValueConfig& config, SimConfig& sim) {
  sim.pickup_fraction = config.get_double("sim.pickup_fraction", sim.pickup_fraction);
  sim.trail_fraction = config.get_double("sim.trail_fraction", sim.trail_fraction);
  sim.deposit_spread_cells = config.get_int("sim.deposit_spread_cells", sim.deposit_spread_cells);
  sim.repose_ratio = config.get_double("sim.repose_ratio", sim.repose_ratio);
  sim.relax_iterations = config.get_int("sim.relax_iterations", sim.relax_iterations);
  sim.noise_std = config.get_double("sim.noise_std", sim.noise_std);
}

void apply_geometry_overrides(const KeyValueConfig& config, GridGeometry& geometry) {
  geometry.width_cells = config.get_int("cells_x", geometry.width_cells);
  geometry.height_cells = config.get_int("cells_y", geometry.height_cells);
  geometry.cell_size = config.get_double("cell_size_m", geometry.cell_size);
  geometry.origin.x = config.get_double("origin_x_m", geometry.origin.x);
  geometry.origin.y = config.get_double("origin_y_m", geometry.origin.y);
  geometry.validate();
}

TaskSpec load_task_config(const std::string& path) {
  const KeyValueConfig config = KeyValueConfig::parse_file(path);
  TaskSpec spec;
  spec.task = parse_task_kind(config.get_string("task", "gather"));
  spec.source = parse_source_kind(config.get_string("source", "one_blob"));
  spec.method = parse_method(config.get_string("method", "ours"));
  apply_geometry_overrides(config, spec.geometry);
  spec.total_mass = config.get_double("total_mass", spec.total_mass);
  spec.iterations = config.get_int("iterations", spec.iterations);
  spec.seed = config.get_seed("seed", spec.seed);
  if (config.has("instance_seed")) spec.instance_seed = config.get_seed("instance_seed", 0);
  apply_planner_overrides(config, spec.planner);
  apply_sim_overrides(config, spec.sim);
  spec.gather_radius = config.get_double("gather_radius", spec.gather_radius);
  if (config.has("gather_center_x") || config.has("gather_center_y"))
    spec.gather_center = Vec2{config.get_double("gather_center_x", 0.0),
                              config.get_double("gather_center_y", 0.0)};
  spec.sep_count = config.get_int("sep_count", spec.sep_count);
  spec.sep_radius = config.get_double("sep_radius", spec.sep_radius);
  const std::string letter = config.get_string("letter", std::string(1, spec.letter));
  if (letter.size() != 1)
    fail(ErrorCode::ConfigError, path + ": field 'letter': expected a single glyph");
  spec.letter = letter[0];
  spec.episode_id = config.get_string("episode_id", "");
  config.reject_unknown_keys();
  spec.validate();
  return spec;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  const KeyValueConfig config = KeyValueConfig::parse_file(path);
  ExperimentConfig out;
  apply_geometry_overrides(config, out.geometry);
  out.total_mass = config.get_double("total_mass", out.total_mass);

  if (config.has("methods")) {
    out.methods.clear();
    std::istringstream list(config.get_string("methods", ""));
    std::string item;
    while (std::getline(list, item, ',')) out.methods.push_back(parse_method(trim(item)));
  }
  if (config.has("sources")) {
    out.sources.clear();
    std::istringstream list(config.get_string("sources", ""));
    std::string item;
    while (std::getline(list, item, ',')) out.sources.push_back(parse_source_kind(trim(item)));
  }
  out.run_gather = config.get_bool("run_gather", out.run_gather);
  out.gather_targets = config.get_int("gather_targets", out.gather_targets);
  out.run_sep = config.get_bool("run_sep", out.run_sep);
  if (config.has("sep_ns")) {
    out.sep_ns.clear();
    std::istringstream list(config.get_string("sep_ns", ""));
    std::string item;
    while (std::getline(list, item, ',')) {
      int n = 0;
      if (!parse_int(trim(item), n) || n < 1)
        fail(ErrorCode::ConfigError, path + ": field 'sep_ns': expected positive integers");
      out.sep_ns.push_back(n);
    }
  }
  out.sep_targets_per_n = config.get_int("sep_targets_per_n", out.sep_targets_per_n);
  out.run_letters = config.get_bool("run_letters", out.run_letters);
  out.letters = config.get_string("letters", out.letters);
  out.iterations_simple = config.get_int("iterations_simple", out.iterations_simple);
  out.iterations_hard = config.get_int("iterations_hard", out.iterations_hard);
  out.letter_iterations = config.get_int("letter_iterations", out.letter_iterations);
  out.base_seed = config.get_seed("base_seed", out.base_seed);
  out.workers = config.get_int("workers", out.workers);
  apply_planner_overrides(config, out.planner);
  apply_sim_overrides(config, out.sim);
  out.gather_radius = config.get_double("gather_radius", out.gather_radius);
  out.sep_radius = config.get_double("sep_radius", out.sep_radius);
  config.reject_unknown_keys();

  if (out.methods.empty()) fail(ErrorCode::ConfigError, path + ": field 'methods': empty");
  if (out.sources.empty()) fail(ErrorCode::ConfigError, path + ": field 'sources': empty");
  if (out.gather_targets < 0 || out.sep_targets_per_n < 0)
    fail(ErrorCode::ConfigError, path + ": target counts must be nonnegative");
  if (out.iterations_simple < 1 || out.iterations_hard < 1 || out.letter_iterations < 1)
    fail(ErrorCode::ConfigError, path + ": iteration budgets must be >= 1");
  if (out.workers < 1) fail(ErrorCode::ConfigError, path + ": field 'workers': must be >= 1");
  out.planner.validate();
  out.sim.validate();
  return out;
}

}  // namespace sweepot
