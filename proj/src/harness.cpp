#include "sweepot/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "sweepot/text.hpp"

namespace sweepot {
namespace {

constexpr int kPlacementAttempts = 1000;

Vec2 sample_margin_center(const GridGeometry& g, double margin, Rng& rng) {
  const double lo_x = g.min_x() + margin;
  const double hi_x = g.max_x() - margin;
  const double lo_y = g.min_y() + margin;
  const double hi_y = g.max_y() - margin;
  if (lo_x >= hi_x || lo_y >= hi_y)
    fail(ErrorCode::InfeasibleGeometry, "target disc does not fit inside the workspace margin");
  return {rng.uniform(lo_x, hi_x), rng.uniform(lo_y, hi_y)};
}

std::optional<SweepAction> plan_action(Method method, const TransportPlan& plan,
                                       const HeightMap& current, const HeightMap& target,
                                       const PlannerConfig& cfg, Rng& rng) {
  switch (method) {
    case Method::Ours:
      return next_best_sweep(plan, cfg, rng);
    case Method::MaxOt:
      try {
        return baseline_max_ot(plan, cfg);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::NoNonTrivialEdge) return std::nullopt;
        throw;
      }
    case Method::DiffMap:
      try {
        return baseline_diff_map(current, target, cfg, rng);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::Converged || e.code() == ErrorCode::SamplingExhausted)
          return std::nullopt;
        throw;
      }
  }
  fail(ErrorCode::Internal, "unknown method");
}

std::string default_episode_id(const TaskSpec& spec) {
  std::ostringstream id;
  id << to_string(spec.task);
  if (spec.task == TaskKind::SepN) id << spec.sep_count;
  if (spec.task == TaskKind::Letter) id << '-' << spec.letter;
  id << '-' << to_string(spec.source) << '-' << to_string(spec.method) << "-s" << spec.seed;
  return id.str();
}

std::string task_family(const TaskSpec& spec) {
  switch (spec.task) {
    case TaskKind::Gather: return "gather";
    case TaskKind::SepN: return "sep";
    case TaskKind::Letter: return "letter";
  }
  return "?";
}

}  // namespace

TaskKind parse_task_kind(const std::string& name) {
  if (name == "gather") return TaskKind::Gather;
  if (name == "sep_n" || name == "sep") return TaskKind::SepN;
  if (name == "letter") return TaskKind::Letter;
  fail(ErrorCode::ConfigError, "unknown task kind '" + name + "'");
}

Method parse_method(const std::string& name) {
  if (name == "ours") return Method::Ours;
  if (name == "max_ot") return Method::MaxOt;
  if (name == "diff_map") return Method::DiffMap;
  fail(ErrorCode::ConfigError, "unknown method '" + name + "'");
}

const char* to_string(TaskKind kind) {
  switch (kind) {
    case TaskKind::Gather: return "gather";
    case TaskKind::SepN: return "sep";
    case TaskKind::Letter: return "letter";
  }
  return "?";
}

const char* to_string(Method method) {
  switch (method) {
    case Method::Ours: return "ours";
    case Method::MaxOt: return "max_ot";
    case Method::DiffMap: return "diff_map";
  }
  return "?";
}

void TaskSpec::validate() const {
  geometry.validate();
  if (!(total_mass > 0.0)) fail(ErrorCode::ConfigError, "total_mass must be positive");
  if (iterations < 1) fail(ErrorCode::ConfigError, "iteration budget must be >= 1");
  if (task == TaskKind::SepN && sep_count < 1)
    fail(ErrorCode::ConfigError, "sep_count must be >= 1");
  if (!(gather_radius > 0.0) || !(sep_radius > 0.0))
    fail(ErrorCode::ConfigError, "target radii must be positive");
  planner.validate();
  sim.validate();
}

HeightMap build_target(const TaskSpec& spec, std::uint64_t placement_seed) {
  Rng rng(placement_seed);
  switch (spec.task) {
    case TaskKind::Gather: {
      Vec2 center;
      if (spec.gather_center.has_value()) {
        center = *spec.gather_center;
      } else {
        const double margin = spec.gather_radius + spec.planner.spatula_width;
        center = sample_margin_center(spec.geometry, margin, rng);
      }
      return generate_target_gather(spec.geometry, spec.total_mass, center, spec.gather_radius);
    }
    case TaskKind::SepN: {
      if (spec.sep_centers.has_value())
        return generate_target_sep(spec.geometry, spec.total_mass, *spec.sep_centers,
                                   spec.sep_radius);
      const double margin = spec.sep_radius + spec.planner.spatula_width;
      const double min_gap = 2.0 * spec.sep_radius + spec.geometry.cell_size;
      // Discs are placed one at a time, resampling only the conflicting disc;
      // a full restart handles the rare dead-end layouts. Joint resampling of
      // all n discs has a vanishing acceptance rate for n = 4 at desk scale.
      for (int restart = 0; restart < 100; ++restart) {
        std::vector<Vec2> centers;
        while (static_cast<int>(centers.size()) < spec.sep_count) {
          bool placed = false;
          for (int attempt = 0; attempt < kPlacementAttempts && !placed; ++attempt) {
            const Vec2 candidate = sample_margin_center(spec.geometry, margin, rng);
            placed = true;
            for (const Vec2& other : centers)
              if ((candidate - other).norm() < min_gap) placed = false;
            if (placed) centers.push_back(candidate);
          }
          if (!placed) break;
        }
        if (static_cast<int>(centers.size()) == spec.sep_count)
          return generate_target_sep(spec.geometry, spec.total_mass, centers, spec.sep_radius);
      }
      fail(ErrorCode::InfeasibleGeometry,
           "could not place " + std::to_string(spec.sep_count) + " disjoint separation discs");
    }
    case TaskKind::Letter:
      return generate_target_letter(spec.geometry, spec.total_mass, spec.letter);
  }
  fail(ErrorCode::Internal, "unknown task kind");
}

EpisodeRecord run_episode_on(const TaskSpec& spec, HeightMap source_map, HeightMap target_map,
                             bool keep_steps) {
  spec.validate();
  EpisodeRecord record;
  record.spec = spec;
  record.spec.episode_id = spec.episode_id.empty() ? default_episode_id(spec) : spec.episode_id;
  record.metrics.episode_id = record.spec.episode_id;

  try {
    Rng planner_rng(hash_mix(spec.seed, "planner"));
    Rng sim_rng(hash_mix(spec.seed, "sim"));
    const GroundCost cost = ground_cost(spec.geometry, spec.geometry, 1.0);
    const NormalizedDistribution target_dist = normalize(target_map);
    const double iou_threshold = default_iou_threshold(target_map);

    record.source_map = std::move(source_map);
    record.target_map = std::move(target_map);
    HeightMap current = record.source_map;

    for (int iteration = 0;; ++iteration) {
      const TransportPlan plan = solve_ot(normalize(current), target_dist, cost);
      record.metrics.records.push_back(
          {iteration, plan.cost, iou(current, record.target_map, iou_threshold)});
      if (plan.cost <= spec.planner.convergence_emd) {
        record.converged = true;
        break;
      }
      if (iteration == spec.iterations) break;  // budget exhausted

      const std::optional<SweepAction> action =
          plan_action(spec.method, plan, current, record.target_map, spec.planner, planner_rng);
      if (!action.has_value()) {
        record.converged = true;
        break;
      }
      current = apply_sweep(current, *action, spec.sim, sim_rng).map;
      ++record.actions_taken;
      if (keep_steps) record.steps.push_back({*action, current});
    }
    record.final_map = std::move(current);
  } catch (const Error& e) {
    throw Error(e.code(), record.metrics.episode_id + ": " + e.what());
  }
  return record;
}

EpisodeRecord run_episode(const TaskSpec& spec, bool keep_steps) {
  spec.validate();
  const std::uint64_t instance = spec.instance_seed.value_or(spec.seed);
  HeightMap source_map =
      generate_source(spec.source, spec.geometry, spec.total_mass, hash_mix(instance, "source"));
  HeightMap target_map = build_target(spec, hash_mix(instance, "target"));
  return run_episode_on(spec, std::move(source_map), std::move(target_map), keep_steps);
}

std::vector<TaskSpec> expand_experiment(const ExperimentConfig& config) {
  std::vector<TaskSpec> specs;
  TaskSpec base;
  base.geometry = config.geometry;
  base.total_mass = config.total_mass;
  base.planner = config.planner;
  base.sim = config.sim;
  base.gather_radius = config.gather_radius;
  base.sep_radius = config.sep_radius;

  const auto push_methods = [&specs, &config](const TaskSpec& spec,
                                              const std::string& task_label) {
    const std::uint64_t instance =
        hash_mix(hash_mix(config.base_seed, task_label), to_string(spec.source));
    for (const Method method : config.methods) {
      TaskSpec episode = spec;
      episode.method = method;
      episode.instance_seed = instance;
      episode.seed = hash_mix(instance, to_string(method));
      episode.episode_id =
          task_label + "-" + to_string(spec.source) + "-" + to_string(method);
      specs.push_back(std::move(episode));
    }
  };

  for (const SourceKind source : config.sources) {
    if (config.run_gather) {
      for (int t = 0; t < config.gather_targets; ++t) {
        TaskSpec spec = base;
        spec.task = TaskKind::Gather;
        spec.source = source;
        spec.iterations = config.iterations_for(source);
        push_methods(spec, "gather" + std::to_string(t));
      }
    }
    if (config.run_sep) {
      for (const int n : config.sep_ns) {
        for (int t = 0; t < config.sep_targets_per_n; ++t) {
          TaskSpec spec = base;
          spec.task = TaskKind::SepN;
          spec.sep_count = n;
          spec.source = source;
          spec.iterations = config.iterations_for(source);
          push_methods(spec, "sep" + std::to_string(n) + "-" + std::to_string(t));
        }
      }
    }
  }
  if (config.run_letters) {
    for (const char glyph : config.letters) {
      TaskSpec spec = base;
      spec.task = TaskKind::Letter;
      spec.letter = glyph;
      spec.source = SourceKind::OneBlob;  // letters start from one blob
      spec.iterations = config.letter_iterations;
      push_methods(spec, std::string("letter-") + glyph);
    }
  }
  return specs;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  const std::vector<TaskSpec> specs = expand_experiment(config);
  std::vector<EpisodeRecord> episodes(specs.size());

  std::atomic<std::size_t> next{0};
  const int workers =
      std::max(1, std::min<int>(config.workers, static_cast<int>(specs.size())));
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> worker_errors(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&specs, &episodes, &next, &worker_errors, w] {
      try {
        while (true) {
          const std::size_t k = next.fetch_add(1);
          if (k >= specs.size()) break;
          episodes[k] = run_episode(specs[k], /*keep_steps=*/false);
        }
      } catch (...) {
        worker_errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (std::thread& t : pool) t.join();
  for (const std::exception_ptr& err : worker_errors)
    if (err) std::rethrow_exception(err);

  ExperimentResult result;
  result.episodes = std::move(episodes);

  // Group curves per (method, task family, source); early-stopped episodes
  // repeat their final record so curves stay length-aligned.
  struct GroupKey {
    std::string family;
    Method method;
    SourceKind source;
    bool operator<(const GroupKey& o) const {
      if (family != o.family) return family < o.family;
      if (method != o.method) return method < o.method;
      return source < o.source;
    }
  };
  std::map<GroupKey, std::vector<MetricSeries>> grouped;
  for (const EpisodeRecord& episode : result.episodes) {
    MetricSeries padded = episode.metrics;
    while (static_cast<int>(padded.records.size()) < episode.spec.iterations + 1) {
      MetricRecord last = padded.records.back();
      last.iteration = static_cast<int>(padded.records.size());
      padded.records.push_back(last);
    }
    grouped[{task_family(episode.spec), episode.spec.method, episode.spec.source}].push_back(
        std::move(padded));
  }
  for (auto& [key, series] : grouped)
    result.groups.push_back({key.method, key.family, key.source, quantiles(series)});
  return result;
}

void write_experiment_outputs(const ExperimentResult& result, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  {
    std::vector<MetricSeries> all;
    all.reserve(result.episodes.size());
    for (const EpisodeRecord& episode : result.episodes) all.push_back(episode.metrics);
    std::ofstream out(out_dir + "/metrics.csv", std::ios::binary);
    if (!out.is_open()) fail(ErrorCode::ConfigError, out_dir + "/metrics.csv: cannot write");
    write_metrics_csv(all, out);
  }
  for (const QuantileGroup& group : result.groups) {
    const std::string path = out_dir + "/quantiles_" + to_string(group.method) + "_" +
                             group.task_family + "_" + to_string(group.source) + ".csv";
    std::ofstream out(path, std::ios::binary);
    if (!out.is_open()) fail(ErrorCode::ConfigError, path + ": cannot write");
    write_quantiles_csv(group.table, out);
  }
  {
    std::ofstream out(out_dir + "/summary.csv", std::ios::binary);
    if (!out.is_open()) fail(ErrorCode::ConfigError, out_dir + "/summary.csv: cannot write");
    out << "method,task,source,final_emd_m_q50,final_emd_m_q05,final_emd_m_q95,final_iou_q50\n";
    for (const QuantileGroup& group : result.groups) {
      const QuantileRow& emd_row = group.table.emd.back();
      const QuantileRow& iou_row = group.table.iou.back();
      out << to_string(group.method) << ',' << group.task_family << ','
          << to_string(group.source) << ',' << format_double(emd_row.q50) << ','
          << format_double(emd_row.q05) << ',' << format_double(emd_row.q95) << ','
          << format_double(iou_row.q50) << '\n';
    }
  }
}

std::string format_experiment_summary(const ExperimentResult& result) {
  std::ostringstream out;
  out << "final EMD x10^3, median [5%, 95%]\n";
  for (const QuantileGroup& group : result.groups) {
    const QuantileRow& row = group.table.emd.back();
    char line[160];
    std::snprintf(line, sizeof(line), "%-8s %-7s %-10s %7.2f  [%7.2f, %7.2f]\n",
                  to_string(group.method), group.task_family.c_str(), to_string(group.source),
                  row.q50 * 1e3, row.q05 * 1e3, row.q95 * 1e3);
    out << line;
  }
  return out.str();
}

}  // namespace sweepot
