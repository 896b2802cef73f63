#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sweepot/granular_sim.hpp"
#include "sweepot/metrics.hpp"
#include "sweepot/shapes.hpp"
#include "sweepot/sweep_planner.hpp"

namespace sweepot {

enum class TaskKind { Gather, SepN, Letter };
enum class Method { Ours, MaxOt, DiffMap };

TaskKind parse_task_kind(const std::string& name);
Method parse_method(const std::string& name);
const char* to_string(TaskKind kind);
const char* to_string(Method method);

/// One closed-loop run: task family, initial distribution, method, budgets
/// and all module configs. Target placement fields are optional; when unset
/// they are randomized from the seed (gather/sep) or fixed (letter glyph).
struct TaskSpec {
  TaskKind task = TaskKind::Gather;
  SourceKind source = SourceKind::OneBlob;
  Method method = Method::Ours;
  GridGeometry geometry;
  double total_mass = 0.001;  // m^3
  int iterations = 30;
  std::uint64_t seed = 0;  // planner/sim randomness
  // Source generation and target placement derive from this so that several
  // methods can share one task instance; defaults to `seed`.
  std::optional<std::uint64_t> instance_seed;
  PlannerConfig planner;
  SimConfig sim;
  double gather_radius = ShapeDefaults::kGatherRadius;
  std::optional<Vec2> gather_center;
  int sep_count = 2;
  double sep_radius = ShapeDefaults::kSepRadius;
  std::optional<std::vector<Vec2>> sep_centers;
  char letter = 'T';
  std::string episode_id;

  void validate() const;
};

/// Builds the task's target map, resolving randomized placements with the
/// given seed. Placement keeps discs at least one spatula width from the
/// workspace boundary and sep centers at least 2*radius + cell_size apart.
HeightMap build_target(const TaskSpec& spec, std::uint64_t placement_seed);

struct EpisodeStep {
  SweepAction action;
  HeightMap map_after;
};

struct EpisodeRecord {
  TaskSpec spec;
  HeightMap source_map;
  HeightMap target_map;
  HeightMap final_map;
  std::vector<EpisodeStep> steps;  // dropped when keep_steps = false
  MetricSeries metrics;            // one record per iteration, index 0 = initial
  int actions_taken = 0;
  bool converged = false;
};

/// Closed perceive-plan-act loop: measure EMD/IoU, plan with the configured
/// method, apply the sweep through the simulator, repeat until the budget or
/// convergence. Deterministic given spec.seed.
EpisodeRecord run_episode(const TaskSpec& spec, bool keep_steps = true);

/// Variant with explicit maps (the maps the spec would otherwise generate).
EpisodeRecord run_episode_on(const TaskSpec& spec, HeightMap source_map, HeightMap target_map,
                             bool keep_steps = true);

struct ExperimentConfig {
  GridGeometry geometry;
  double total_mass = 0.001;
  std::vector<Method> methods = {Method::Ours, Method::MaxOt, Method::DiffMap};
  std::vector<SourceKind> sources = {SourceKind::OneBlob, SourceKind::TwoBlobs,
                                     SourceKind::FourBlobs, SourceKind::Gaussian,
                                     SourceKind::Uniform};
  bool run_gather = true;
  int gather_targets = 10;
  bool run_sep = true;
  std::vector<int> sep_ns = {2, 3, 4};
  int sep_targets_per_n = 3;
  bool run_letters = true;
  std::string letters = "ETHASL";
  int iterations_simple = 30;  // one_blob, two_blobs, gaussian
  int iterations_hard = 50;    // four_blobs, uniform
  int letter_iterations = 50;
  std::uint64_t base_seed = 0;
  int workers = 1;
  PlannerConfig planner;
  SimConfig sim;
  double gather_radius = ShapeDefaults::kGatherRadius;
  double sep_radius = ShapeDefaults::kSepRadius;

  int iterations_for(SourceKind kind) const {
    return (kind == SourceKind::FourBlobs || kind == SourceKind::Uniform) ? iterations_hard
                                                                          : iterations_simple;
  }
};

/// Quantile curves for one (method, task family, source) cell of the grid.
struct QuantileGroup {
  Method method;
  std::string task_family;  // "gather", "sep", "letter"
  SourceKind source;
  QuantileTable table;
};

struct ExperimentResult {
  std::vector<EpisodeRecord> episodes;  // enumeration order, steps dropped
  std::vector<QuantileGroup> groups;
};

/// Expands the grid into task specs in a fixed enumeration order. Methods
/// face identical task instances: target placement and source seeds do not
/// depend on the method.
std::vector<TaskSpec> expand_experiment(const ExperimentConfig& config);

ExperimentResult run_experiment(const ExperimentConfig& config);

/// Writes metrics.csv, per-group quantiles_<method>_<task>_<source>.csv and
/// summary.csv into `out_dir` (created if missing).
void write_experiment_outputs(const ExperimentResult& result, const std::string& out_dir);

/// Renders the final-EMD summary (median [5%, 95%] per group, x10^3 display
/// scaling) as the paper-style text table.
std::string format_experiment_summary(const ExperimentResult& result);

// --- Flat key-value config files -------------------------------------------
// Lines are `key = value`; '#' starts a comment; unknown keys are rejected.

class KeyValueConfig {
 public:
  static KeyValueConfig parse_file(const std::string& path);
  static KeyValueConfig parse_string(const std::string& text, const std::string& name);

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  std::uint64_t get_seed(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  /// Throws ConfigError listing any key never read by a getter.
  void reject_unknown_keys() const;

 private:
  std::string name_;
  std::map<std::string, std::string> values_;
  mutable std::map<std::string, bool> consumed_;
};

/// Reads planner.* / sim.* overrides shared by several CLI commands.
void apply_planner_overrides(const KeyValueConfig& config, PlannerConfig& planner);
void apply_sim_overrides(const KeyValueConfig& config, SimConfig& sim);
void apply_geometry_overrides(const KeyValueConfig& config, GridGeometry& geometry);

TaskSpec load_task_config(const std::string& path);
ExperimentConfig load_experiment_config(const std::string& path);

}  // namespace sweepot
