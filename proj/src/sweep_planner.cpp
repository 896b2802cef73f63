#include "sweepot/sweep_planner.hpp"

#include <algorithm>
#include <cmath>

namespace sweepot {
namespace {

// Draws an entry index with probability proportional to entry mass.
std::size_t sample_entry(const std::vector<double>& cumulative, double total, Rng& rng) {
  const double r = rng.uniform01() * total;
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), r);
  std::size_t k = static_cast<std::size_t>(it - cumulative.begin());
  if (k >= cumulative.size()) k = cumulative.size() - 1;
  return k;
}

// Draws a cell index with probability proportional to `weights` (sum > 0).
int sample_cell(const std::vector<double>& weights, double total, Rng& rng) {
  double r = rng.uniform01() * total;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    r -= weights[i];
    if (r < 0.0) return static_cast<int>(i);
  }
  for (std::size_t i = weights.size(); i-- > 0;)
    if (weights[i] > 0.0) return static_cast<int>(i);
  return 0;
}

}  // namespace

Vec2 SweepAction::direction() const {
  const double len = length();
  if (!(len > 0.0)) fail(ErrorCode::InvalidArgument, "sweep has zero length");
  return (end - start) * (1.0 / len);
}

void PlannerConfig::validate() const {
  if (!(alpha_plus >= 0.0) || !(alpha_minus >= 0.0))
    fail(ErrorCode::ConfigError, "alpha weights must be nonnegative");
  if (num_samples < 1) fail(ErrorCode::ConfigError, "num_samples must be >= 1");
  if (!(delta_refine > 0.0)) fail(ErrorCode::ConfigError, "delta_refine must be positive");
  if (!(delta_min > 0.0)) fail(ErrorCode::ConfigError, "delta_min must be positive");
  if (!(spatula_width > 0.0)) fail(ErrorCode::ConfigError, "spatula_width must be positive");
}

SweepPatch make_patch(const SweepAction& action, const GridGeometry& source_geometry) {
  SweepPatch patch;
  patch.action = action;
  patch.direction = action.direction();
  patch.source_geometry = source_geometry;
  patch.membership.assign(static_cast<std::size_t>(source_geometry.num_cells()), 0);
  const double len = action.length();
  const double half = action.spatula_width * 0.5;
  const Vec2 lateral = patch.direction.perp();
  for (int i = 0; i < source_geometry.num_cells(); ++i) {
    const Vec2 rel = source_geometry.cell_center(i) - action.start;
    const double along = rel.dot(patch.direction);
    if (along < 0.0 || along > len) continue;
    const double cross = rel.dot(lateral);
    if (cross < -half || cross > half) continue;
    patch.cell_indices.push_back(i);
    patch.membership[static_cast<std::size_t>(i)] = 1;
  }
  return patch;
}

PushPrediction push_prediction(const SweepPatch& patch, int cell_index) {
  if (cell_index < 0 || cell_index >= patch.source_geometry.num_cells() ||
      !patch.contains(cell_index))
    fail(ErrorCode::CellOutsidePatch,
         "cell " + std::to_string(cell_index) + " is not covered by the sweep");
  const Vec2 center = patch.source_geometry.cell_center(cell_index);
  const Vec2 rel = center - patch.action.start;
  const double cross = rel.dot(patch.direction.perp());
  const Vec2 predicted_end = patch.action.start + patch.direction * patch.action.length() +
                             patch.direction.perp() * cross;
  return {predicted_end - center, predicted_end};
}

double edge_heuristic(const SweepPatch& patch, int source_index, int target_index,
                      const GridGeometry& target_geometry, const PlannerConfig& cfg) {
  const PushPrediction push = push_prediction(patch, source_index);
  const Vec2 source_center = patch.source_geometry.cell_center(source_index);
  const Vec2 target_center = target_geometry.cell_center(target_index);
  const Vec2 t_edge = target_center - source_center;
  const Vec2 t_error = target_center - push.predicted_end;
  const double reward = std::max(patch.direction.dot(t_edge), 0.0);
  const double overshoot = std::min(patch.direction.dot(t_error), 0.0);
  return cfg.alpha_plus * reward + cfg.alpha_minus * overshoot;
}

double sweep_score(const TransportPlan& plan, const SweepAction& action,
                   const PlannerConfig& cfg) {
  const SweepPatch patch = make_patch(action, plan.source_geometry);
  double score = 0.0;
  for (const PlanEntry& e : plan.entries) {
    if (!patch.contains(e.source_index)) continue;
    score += e.mass * edge_heuristic(patch, e.source_index, e.target_index,
                                     plan.target_geometry, cfg);
  }
  return score;
}

std::vector<SweepAction> sample_candidates(const TransportPlan& plan, const PlannerConfig& cfg,
                                           Rng& rng) {
  cfg.validate();
  if (plan.entries.empty()) fail(ErrorCode::EmptyPlan, "transport plan has no entries");

  // Very short edges are discarded up front: the draw runs over the transport
  // distribution restricted to sweeps of at least delta_min, so a transient
  // run of short draws cannot starve the candidate set while actionable mass
  // remains.
  std::vector<std::size_t> admissible;
  std::vector<double> cumulative;
  double total = 0.0;
  for (std::size_t k = 0; k < plan.entries.size(); ++k) {
    const PlanEntry& e = plan.entries[k];
    const Vec2 span = plan.target_geometry.cell_center(e.target_index) -
                      plan.source_geometry.cell_center(e.source_index);
    if (span.norm() < cfg.delta_min) continue;
    admissible.push_back(k);
    total += e.mass;
    cumulative.push_back(total);
  }

  std::vector<SweepAction> candidates;
  if (admissible.empty()) return candidates;
  for (int draw = 0; draw < cfg.num_samples; ++draw) {
    const PlanEntry& edge = plan.entries[admissible[sample_entry(cumulative, total, rng)]];
    const Vec2 start = plan.source_geometry.cell_center(edge.source_index);
    const Vec2 end = plan.target_geometry.cell_center(edge.target_index);
    const double len = (end - start).norm();
    const Vec2 dir = (end - start) * (1.0 / len);
    // Sweep segments run cell center to cell center, so they stay inside the
    // workspace; spatula overhang beyond a wall is truncated by patch
    // membership (and the simulator's walls). Full sweep first, then
    // end-point refinements: earliest-in-order ties prefer the full push.
    candidates.push_back({start, end, cfg.spatula_width});
    for (int k = 1; k * cfg.delta_refine < len; ++k) {
      const double t = k * cfg.delta_refine;
      if (t < cfg.delta_min) continue;
      candidates.push_back({start, start + dir * t, cfg.spatula_width});
    }
  }
  return candidates;
}

SweepSelection rank_candidates(const TransportPlan& plan, const PlannerConfig& cfg, Rng& rng) {
  SweepSelection selection;
  if (plan.cost <= cfg.convergence_emd) return selection;  // nothing worth moving
  selection.candidates = sample_candidates(plan, cfg, rng);
  selection.scores.reserve(selection.candidates.size());
  for (std::size_t k = 0; k < selection.candidates.size(); ++k) {
    const double score = sweep_score(plan, selection.candidates[k], cfg);
    selection.scores.push_back(score);
    if (selection.best_index < 0) {
      selection.best_index = static_cast<int>(k);
      continue;
    }
    // Ties keep the earliest candidate; the relative margin absorbs summation
    // rounding so exact ties stay ties under any positive rescaling of T.
    const double best = selection.scores[static_cast<std::size_t>(selection.best_index)];
    const double margin = 1e-12 * (std::abs(best) + std::abs(score));
    if (score > best + margin) selection.best_index = static_cast<int>(k);
  }
  return selection;
}

std::optional<SweepAction> next_best_sweep(const TransportPlan& plan, const PlannerConfig& cfg,
                                           Rng& rng) {
  const SweepSelection selection = rank_candidates(plan, cfg, rng);
  if (!selection.has_action()) return std::nullopt;
  return selection.best();
}

std::optional<SweepAction> next_best_sweep(const HeightMap& source, const HeightMap& target,
                                           const PlannerConfig& cfg, Rng& rng) {
  if (!(source.geometry == target.geometry))
    fail(ErrorCode::DimensionMismatch, "source and target maps must share geometry");
  const double mass_s = source.total_mass();
  const double mass_t = target.total_mass();
  const double scale = std::max(mass_s, mass_t);
  if (scale > 0.0 && std::abs(mass_s - mass_t) > 1e-6 * scale)
    fail(ErrorCode::UnbalancedMass, "source and target total mass differ");
  const GroundCost cost = ground_cost(source.geometry, target.geometry, 1.0);
  const TransportPlan plan = solve_ot(normalize(source), normalize(target), cost);
  return next_best_sweep(plan, cfg, rng);
}

SweepAction baseline_max_ot(const TransportPlan& plan, const PlannerConfig& cfg) {
  const PlanEntry* best = nullptr;
  for (const PlanEntry& e : plan.entries) {
    const Vec2 from = plan.source_geometry.cell_center(e.source_index);
    const Vec2 to = plan.target_geometry.cell_center(e.target_index);
    if (from == to) continue;
    if (best == nullptr || e.mass > best->mass) best = &e;  // entries sorted by (i, j)
  }
  if (best == nullptr)
    fail(ErrorCode::NoNonTrivialEdge, "every transport edge is diagonal");
  return {plan.source_geometry.cell_center(best->source_index),
          plan.target_geometry.cell_center(best->target_index), cfg.spatula_width};
}

SweepAction baseline_max_ot(const HeightMap& source, const HeightMap& target,
                            const PlannerConfig& cfg) {
  const GroundCost cost = ground_cost(source.geometry, target.geometry, 1.0);
  return baseline_max_ot(solve_ot(normalize(source), normalize(target), cost), cfg);
}

SweepAction baseline_diff_map(const HeightMap& source, const HeightMap& target,
                              const PlannerConfig& cfg, Rng& rng) {
  if (!(source.geometry == target.geometry))
    fail(ErrorCode::DimensionMismatch, "diff-map baseline requires identical geometries");
  const NormalizedDistribution ns = normalize(source);
  const NormalizedDistribution nt = normalize(target);
  std::vector<double> excess(ns.weights.size()), lack(ns.weights.size());
  double excess_total = 0.0, lack_total = 0.0;
  for (std::size_t i = 0; i < ns.weights.size(); ++i) {
    excess[i] = std::max(ns.weights[i] - nt.weights[i], 0.0);
    lack[i] = std::max(nt.weights[i] - ns.weights[i], 0.0);
    excess_total += excess[i];
    lack_total += lack[i];
  }
  if (excess_total <= 0.0 || lack_total <= 0.0)
    fail(ErrorCode::Converged, "difference maps are empty, shapes already match");
  for (int attempt = 0; attempt < 100; ++attempt) {
    const int from = sample_cell(excess, excess_total, rng);
    const int to = sample_cell(lack, lack_total, rng);
    const Vec2 start = source.geometry.cell_center(from);
    const Vec2 end = source.geometry.cell_center(to);
    if ((end - start).norm() >= cfg.delta_min) return {start, end, cfg.spatula_width};
  }
  fail(ErrorCode::SamplingExhausted, "no sweep of at least delta_min found in 100 draws");
}

}  // namespace sweepot
