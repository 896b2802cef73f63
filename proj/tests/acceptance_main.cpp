// Acceptance suite: one pass/fail line per criterion. With no arguments all
// ten criteria run; otherwise the listed ones. Exit code = failure count.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "support/oracles.hpp"
#include "sweepot/harness.hpp"

using namespace sweepot;
using namespace sweepot::testing;
using Clock = std::chrono::steady_clock;

namespace {

struct Criterion {
  int id;
  const char* title;
  bool (*run)(std::string& detail);
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

GridGeometry grid(int side, double pitch) {
  GridGeometry g;
  g.width_cells = side;
  g.height_cells = side;
  g.cell_size = pitch;
  g.origin = {pitch / 2.0, pitch / 2.0};
  return g;
}

// --- 1: OT oracle equivalence ----------------------------------------------
bool criterion_ot_oracle(std::string& detail) {
  const auto start = Clock::now();
  double worst_gap = 0.0, worst_marginal = 0.0;
  int instances = 0;
  Rng rng(20240801);
  // >= 200 seeded random instances with up to 4 cells per support
  GridGeometry shapes[5];
  for (int cells = 1; cells <= 4; ++cells) {
    shapes[cells - 1].width_cells = cells;
    shapes[cells - 1].height_cells = 1;
    shapes[cells - 1].cell_size = 0.05;
    shapes[cells - 1].origin = {0.025, 0.025};
  }
  shapes[4] = grid(2, 0.05);
  for (const GridGeometry& g : shapes) {
    GridGeometry offset_target = g;
    offset_target.origin = {0.07, 0.03};
    const GroundCost cost = ground_cost(g, offset_target, 1.0);
    for (int trial = 0; trial < 45; ++trial) {
      const NormalizedDistribution source = random_distribution(g, rng, 0.3);
      const NormalizedDistribution target = random_distribution(offset_target, rng, 0.3);
      const TransportPlan fast = solve_ot(source, target, cost);
      const TransportPlan oracle = brute_force_ot(source, target, cost);
      worst_gap = std::max(worst_gap, std::abs(fast.cost - oracle.cost));
      worst_marginal = std::max(worst_marginal, max_marginal_violation(fast));
      ++instances;
    }
  }
  // marginal feasibility on full 625x625 grid instances
  const GridGeometry full = GridGeometry{};
  const GroundCost full_cost = ground_cost(full, full, 1.0);
  for (int trial = 0; trial < 3; ++trial) {
    NormalizedDistribution source{full, std::vector<double>(625)};
    NormalizedDistribution target{full, std::vector<double>(625)};
    double ss = 0.0, st = 0.0;
    for (double& w : source.weights) ss += (w = rng.uniform01() + 1e-3);
    for (double& w : target.weights) st += (w = rng.uniform01() + 1e-3);
    for (double& w : source.weights) w /= ss;
    for (double& w : target.weights) w /= st;
    const TransportPlan plan = solve_ot(source, target, full_cost);
    worst_marginal = std::max(worst_marginal, max_marginal_violation(plan));
  }
  const double elapsed = seconds_since(start);
  std::ostringstream out;
  out << instances << " oracle instances, worst cost gap " << worst_gap << ", worst marginal "
      << worst_marginal << ", " << elapsed << " s";
  detail = out.str();
  return instances >= 200 && worst_gap <= 1e-7 && worst_marginal <= 1e-7 && elapsed < 60.0;
}

// --- 2: metric axioms -------------------------------------------------------
bool criterion_metric_axioms(std::string& detail) {
  const auto start = Clock::now();
  const GridGeometry g = grid(10, 0.05);
  const GroundCost cost = ground_cost(g, g, 1.0);
  Rng rng(777);
  double worst_identity = 0.0, worst_symmetry = 0.0, worst_triangle = 0.0;
  const int triples = 100;
  for (int trial = 0; trial < triples; ++trial) {
    const NormalizedDistribution a = random_distribution(g, rng);
    const NormalizedDistribution b = random_distribution(g, rng);
    const NormalizedDistribution c = random_distribution(g, rng);
    const double aa = solve_ot(a, a, cost).cost;
    const double ab = solve_ot(a, b, cost).cost;
    const double ba = solve_ot(b, a, cost).cost;
    const double ac = solve_ot(a, c, cost).cost;
    const double cb = solve_ot(c, b, cost).cost;
    worst_identity = std::max(worst_identity, aa);
    worst_symmetry = std::max(worst_symmetry, std::abs(ab - ba));
    worst_triangle = std::max(worst_triangle, ab - (ac + cb));
  }
  const double elapsed = seconds_since(start);
  std::ostringstream out;
  out << triples << " triples, identity " << worst_identity << ", symmetry " << worst_symmetry
      << ", triangle excess " << worst_triangle << ", " << elapsed << " s";
  detail = out.str();
  return worst_identity <= 1e-7 && worst_symmetry <= 1e-7 && worst_triangle <= 1e-7 &&
         elapsed < 60.0;
}

// --- 3: analytic EMD values -------------------------------------------------
bool criterion_analytic(std::string& detail) {
  double worst = 0.0;
  // point-mass translations at several separations
  for (int cells = 1; cells <= 6; ++cells) {
    GridGeometry g;
    g.width_cells = 8;
    g.height_cells = 1;
    g.cell_size = 0.05;
    g.origin = {0.025, 0.025};
    NormalizedDistribution a{g, std::vector<double>(8, 0.0)};
    NormalizedDistribution b{g, std::vector<double>(8, 0.0)};
    a.weights[0] = 1.0;
    b.weights[static_cast<std::size_t>(cells)] = 1.0;
    const double expected = 0.05 * cells;
    worst = std::max(worst, std::abs(emd(a, b) - expected));
  }
  // diagonal translation: 3-4-5 triangle, distance 0.2
  {
    const GridGeometry g = grid(6, 0.04);
    NormalizedDistribution a{g, std::vector<double>(36, 0.0)};
    NormalizedDistribution b{g, std::vector<double>(36, 0.0)};
    a.weights[static_cast<std::size_t>(g.index(0, 0))] = 1.0;
    b.weights[static_cast<std::size_t>(g.index(3, 4))] = 1.0;
    worst = std::max(worst, std::abs(emd(a, b) - 0.2));
  }
  // split 1 -> (1/2, 1/2) over collinear cells 0.1 m apart: 0.15
  {
    GridGeometry g;
    g.width_cells = 3;
    g.height_cells = 1;
    g.cell_size = 0.1;
    g.origin = {0.05, 0.05};
    NormalizedDistribution a{g, {0.5, 0.5, 0.0}};
    NormalizedDistribution b{g, {0.0, 0.0, 1.0}};
    worst = std::max(worst, std::abs(emd(a, b) - 0.15));
  }
  std::ostringstream out;
  out << "worst analytic deviation " << worst;
  detail = out.str();
  return worst <= 1e-9;
}

// --- 4: planner internal consistency ----------------------------------------
bool criterion_planner_consistency(std::string& detail) {
  const GridGeometry g;
  const GroundCost cost = ground_cost(g, g, 1.0);
  PlannerConfig cfg;
  Rng seeds(0xF00D);
  int instances = 0, argmax_ok = 0, scale_ok = 0;
  while (instances < 50) {
    const SourceKind kind = instances % 2 == 0 ? SourceKind::FourBlobs : SourceKind::Uniform;
    const HeightMap source = generate_source(kind, g, 0.001, seeds.next_u64());
    const double cx = 0.15 + 0.2 * Rng(seeds.next_u64()).uniform01();
    const double cy = 0.15 + 0.2 * Rng(seeds.next_u64()).uniform01();
    const HeightMap target = generate_target_gather(g, 0.001, {cx, cy}, 0.08);
    const TransportPlan plan = solve_ot(normalize(source), normalize(target), cost);
    const std::uint64_t rng_seed = seeds.next_u64();
    Rng rng_a(rng_seed);
    const SweepSelection base = rank_candidates(plan, cfg, rng_a);
    if (!base.has_action()) continue;
    ++instances;
    bool max_holds = true;
    for (const double score : base.scores)
      if (score > base.scores[static_cast<std::size_t>(base.best_index)] + 1e-12)
        max_holds = false;
    argmax_ok += max_holds ? 1 : 0;

    TransportPlan scaled = plan;
    for (PlanEntry& e : scaled.entries) e.mass *= 3.7;
    Rng rng_b(rng_seed);
    const SweepSelection multiplied = rank_candidates(scaled, cfg, rng_b);
    const bool same = multiplied.has_action() && multiplied.best_index == base.best_index &&
                      multiplied.best().start == base.best().start &&
                      multiplied.best().end == base.best().end;
    scale_ok += same ? 1 : 0;
  }
  std::ostringstream out;
  out << instances << " instances, argmax held on " << argmax_ok << ", scale-invariant on "
      << scale_ok;
  detail = out.str();
  return argmax_ok == instances && scale_ok == instances;
}

// --- 5: push-model degeneracy -----------------------------------------------
bool criterion_push_degeneracy(std::string& detail) {
  const GridGeometry g;
  SimConfig cfg;
  cfg.pickup_fraction = 1.0;
  cfg.trail_fraction = 0.0;
  cfg.deposit_spread_cells = 0;
  cfg.relax_iterations = 0;
  cfg.noise_std = 0.0;
  Rng rng(0xBEEF);
  int sweeps = 0;
  double worst = 0.0;
  while (sweeps < 20) {
    HeightMap map = HeightMap::zeros(g);
    for (double& h : map.heights) h = rng.uniform01() < 0.4 ? 0.0 : rng.uniform(0.0, 0.05);
    const SweepAction action{{rng.uniform(0.08, 0.42), rng.uniform(0.08, 0.42)},
                             {rng.uniform(0.08, 0.42), rng.uniform(0.08, 0.42)},
                             0.07};
    if (action.length() < 0.05) continue;
    ++sweeps;
    const SweepOutcome outcome = apply_sweep(map, action, cfg);
    HeightMap expected = map;
    const SweepPatch patch = make_patch(action, g);
    for (const int i : patch.cell_indices) expected.heights[static_cast<std::size_t>(i)] = 0.0;
    for (const int i : patch.cell_indices)
      expected.heights[static_cast<std::size_t>(
          g.cell_at(push_prediction(patch, i).predicted_end))] +=
          map.heights[static_cast<std::size_t>(i)];
    for (std::size_t i = 0; i < expected.heights.size(); ++i)
      worst = std::max(worst, std::abs(outcome.map.heights[i] - expected.heights[i]));
  }
  std::ostringstream out;
  out << sweeps << " sweeps, worst cell deviation " << worst;
  detail = out.str();
  return worst <= 1e-12;
}

// --- 6: conservation suite ---------------------------------------------------
bool criterion_conservation(std::string& detail) {
  const GridGeometry g;
  Rng rng(0xCAFE);
  int operations = 0;
  double worst_mass = 0.0;
  bool nonnegative = true;
  while (operations < 1000) {
    HeightMap map = HeightMap::zeros(g);
    for (double& h : map.heights) h = rng.uniform01() < 0.3 ? 0.0 : rng.uniform(0.0, 0.06);
    if (map.height_sum() <= 0.0) continue;
    SimConfig cfg;
    cfg.pickup_fraction = rng.uniform(0.2, 1.0);
    cfg.trail_fraction = rng.uniform(0.0, 0.6);
    cfg.deposit_spread_cells = rng.uniform_int(0, 6);
    cfg.repose_ratio = rng.uniform(0.0, 1.5);
    cfg.relax_iterations = rng.uniform_int(0, 12);
    cfg.noise_std = rng.uniform01() < 0.5 ? 0.0 : rng.uniform(0.0, 0.05);
    const double before = map.height_sum();
    HeightMap after;
    if (operations % 3 == 2) {
      after = repose_relax(map, cfg);
    } else {
      const SweepAction action{{rng.uniform(0.0, 0.5), rng.uniform(0.0, 0.5)},
                               {rng.uniform(0.0, 0.5), rng.uniform(0.0, 0.5)},
                               rng.uniform(0.03, 0.12)};
      if (!(action.length() > 0.0)) continue;
      after = apply_sweep(map, action, cfg, rng).map;
    }
    ++operations;
    worst_mass = std::max(worst_mass, std::abs(after.height_sum() - before) / before);
    for (const double h : after.heights)
      if (h < 0.0) nonnegative = false;
  }
  std::ostringstream out;
  out << operations << " operations, worst relative mass drift " << worst_mass
      << (nonnegative ? ", all heights nonnegative" : ", NEGATIVE HEIGHT SEEN");
  detail = out.str();
  return worst_mass <= 1e-9 && nonnegative;
}

// --- 7: closed-loop convergence ----------------------------------------------
bool criterion_convergence(std::string& detail) {
  const auto start = Clock::now();
  std::vector<MetricSeries> series;
  for (int s = 0; s < 10; ++s) {
    TaskSpec spec;
    spec.task = TaskKind::Gather;
    spec.source = SourceKind::Uniform;
    spec.method = Method::Ours;
    spec.iterations = 50;
    spec.seed = 1000 + static_cast<std::uint64_t>(s);
    EpisodeRecord record = run_episode(spec, /*keep_steps=*/false);
    while (static_cast<int>(record.metrics.records.size()) < 51) {
      MetricRecord last = record.metrics.records.back();
      last.iteration = static_cast<int>(record.metrics.records.size());
      record.metrics.records.push_back(last);
    }
    series.push_back(record.metrics);
  }
  const QuantileTable table = quantiles(series);
  const double initial_median = table.emd.front().q50;
  const double final_median = table.emd.back().q50;
  bool windows_ok = true;
  for (std::size_t t = 0; t + 10 < table.emd.size(); ++t)
    if (table.emd[t + 10].q50 > table.emd[t].q50 * 1.05) windows_ok = false;
  const double elapsed = seconds_since(start);
  std::ostringstream out;
  out << "median EMD " << initial_median << " -> " << final_median << " (ratio "
      << final_median / initial_median << ", need <= 0.25), 10-iteration windows "
      << (windows_ok ? "non-increasing" : "VIOLATED") << ", " << elapsed << " s";
  detail = out.str();
  return final_median <= 0.25 * initial_median && windows_ok && elapsed < 600.0;
}

// --- 8: ordinal method ranking ------------------------------------------------
bool criterion_ranking(std::string& detail) {
  const auto start = Clock::now();
  const SourceKind sources[] = {SourceKind::OneBlob, SourceKind::FourBlobs, SourceKind::Uniform};
  const Method methods[] = {Method::Ours, Method::MaxOt, Method::DiffMap};
  const std::uint64_t base = 77;

  struct Job {
    TaskSpec spec;
    int combo;
    int method;
  };
  std::vector<Job> jobs;
  for (int si = 0; si < 3; ++si) {
    for (int family = 0; family < 2; ++family) {
      for (int target = 0; target < 3; ++target) {
        const std::string task_label =
            (family == 0 ? "gather" : "sep2-") + std::to_string(target);
        const std::uint64_t instance =
            hash_mix(hash_mix(base, task_label), to_string(sources[si]));
        for (int seed_id = 0; seed_id < 5; ++seed_id) {
          for (int mi = 0; mi < 3; ++mi) {
            TaskSpec spec;
            spec.task = family == 0 ? TaskKind::Gather : TaskKind::SepN;
            spec.sep_count = 2;
            spec.source = sources[si];
            spec.method = methods[mi];
            spec.iterations = sources[si] == SourceKind::OneBlob ? 30 : 50;
            spec.instance_seed = instance;
            spec.seed = hash_mix(hash_mix(instance, to_string(methods[mi])),
                                 static_cast<std::uint64_t>(seed_id));
            jobs.push_back({spec, si * 2 + family, mi});
          }
        }
      }
    }
  }

  std::vector<double> finals(jobs.size());
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  const unsigned workers = std::max(2u, std::thread::hardware_concurrency());
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      while (true) {
        const std::size_t k = next.fetch_add(1);
        if (k >= jobs.size()) break;
        finals[k] = run_episode(jobs[k].spec, false).metrics.records.back().emd_m;
      }
    });
  for (std::thread& t : pool) t.join();

  std::vector<double> per_method_combo[3][6];
  for (std::size_t k = 0; k < jobs.size(); ++k)
    per_method_combo[jobs[k].method][jobs[k].combo].push_back(finals[k]);

  const char* combo_names[] = {"one_blob/gather", "one_blob/sep2", "four_blobs/gather",
                               "four_blobs/sep2", "uniform/gather", "uniform/sep2"};
  int wins = 0;
  std::ostringstream out;
  for (int c = 0; c < 6; ++c) {
    const double ours = quantile(per_method_combo[0][c], 0.5);
    const double max_ot = quantile(per_method_combo[1][c], 0.5);
    const double diff_map = quantile(per_method_combo[2][c], 0.5);
    const bool win = ours < max_ot && ours < diff_map;
    wins += win ? 1 : 0;
    out << combo_names[c] << (win ? " won, " : " LOST, ");
  }
  const double elapsed = seconds_since(start);
  out << wins << "/6 wins (need >= 5), " << elapsed << " s";
  detail = out.str();
  return wins >= 5 && elapsed < 1800.0;
}

// --- 9: letter task smoke ------------------------------------------------------
bool criterion_letter(std::string& detail) {
  const auto start = Clock::now();
  std::vector<double> ratios, final_ious;
  for (int s = 0; s < 3; ++s) {
    TaskSpec spec;
    spec.task = TaskKind::Letter;
    spec.letter = 'T';
    spec.source = SourceKind::OneBlob;
    spec.method = Method::Ours;
    spec.iterations = 50;
    spec.seed = 2000 + static_cast<std::uint64_t>(s);
    const EpisodeRecord record = run_episode(spec, /*keep_steps=*/false);
    ratios.push_back(record.metrics.records.back().emd_m /
                     record.metrics.records.front().emd_m);
    final_ious.push_back(record.metrics.records.back().iou);
  }
  const double median_ratio = quantile(ratios, 0.5);
  const double median_iou = quantile(final_ious, 0.5);
  std::ostringstream out;
  out << "median final/initial EMD " << median_ratio << " (need <= 0.40), median final IoU "
      << median_iou << " (need >= 0.4), " << seconds_since(start) << " s";
  detail = out.str();
  return median_ratio <= 0.40 && median_iou >= 0.4;
}

// --- 10: experiment determinism --------------------------------------------------
std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

bool criterion_determinism(std::string& detail) {
  ExperimentConfig config;
  config.sources = {SourceKind::OneBlob, SourceKind::Uniform};
  config.methods = {Method::Ours, Method::MaxOt, Method::DiffMap};
  config.gather_targets = 2;
  config.run_sep = true;
  config.sep_ns = {2};
  config.sep_targets_per_n = 1;
  config.run_letters = true;
  config.letters = "T";
  config.iterations_simple = 5;
  config.iterations_hard = 5;
  config.letter_iterations = 5;
  config.base_seed = 31415;
  config.workers = 2;

  const std::filesystem::path base =
      std::filesystem::temp_directory_path() / "sweepot_acceptance_determinism";
  const std::filesystem::path dir_a = base / "a";
  const std::filesystem::path dir_b = base / "b";
  std::filesystem::remove_all(base);
  write_experiment_outputs(run_experiment(config), dir_a.string());
  ExperimentConfig rerun = config;
  rerun.workers = 1;  // scheduling must not leak into the outputs
  write_experiment_outputs(run_experiment(rerun), dir_b.string());

  std::size_t files = 0;
  bool identical = true;
  for (const auto& entry : std::filesystem::directory_iterator(dir_a)) {
    ++files;
    const std::string a = read_file(entry.path());
    const std::string b = read_file(dir_b / entry.path().filename());
    if (a.empty() || a != b) identical = false;
  }
  std::filesystem::remove_all(base);
  std::ostringstream out;
  out << files << " CSV files compared, " << (identical ? "byte-identical" : "DIFFERENT");
  detail = out.str();
  return files >= 3 && identical;
}

const Criterion kCriteria[] = {
    {1, "OT oracle equivalence and marginal feasibility", criterion_ot_oracle},
    {2, "EMD metric axioms", criterion_metric_axioms},
    {3, "analytic EMD cases", criterion_analytic},
    {4, "planner internal consistency and scale invariance", criterion_planner_consistency},
    {5, "push-model degeneracy", criterion_push_degeneracy},
    {6, "mass conservation and non-negativity", criterion_conservation},
    {7, "closed-loop convergence (gather from uniform)", criterion_convergence},
    {8, "ordinal method ranking (ours vs baselines)", criterion_ranking},
    {9, "letter task smoke (LETTER 'T' from one blob)", criterion_letter},
    {10, "experiment determinism (byte-identical CSVs)", criterion_determinism},
};

}  // namespace

int main(int argc, char** argv) {
  std::set<int> selected;
  for (int a = 1; a < argc; ++a) selected.insert(std::atoi(argv[a]));
  int failures = 0;
  for (const Criterion& criterion : kCriteria) {
    if (!selected.empty() && !selected.count(criterion.id)) continue;
    std::string detail;
    bool ok = false;
    try {
      ok = criterion.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] criterion %d: %s -- %s\n", ok ? "PASS" : "FAIL", criterion.id,
                criterion.title, detail.c_str());
    std::fflush(stdout);
    failures += ok ? 0 : 1;
  }
  return failures;
}
