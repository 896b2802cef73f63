#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sweepot/ot.hpp"
#include "sweepot/rng.hpp"

namespace sweepot {

/// Straight-line sweep of a perpendicular spatula from start to end.
struct SweepAction {
  Vec2 start;
  Vec2 end;
  double spatula_width = 0.07;

  double length() const { return (end - start).norm(); }
  Vec2 direction() const;  // requires length() > 0
};

/// Rectangle swept by the spatula plus the source cells it covers: centers
/// with along-track coordinate in [0, length] and cross-track in
/// [-width/2, +width/2].
struct SweepPatch {
  SweepAction action;
  Vec2 direction;
  GridGeometry source_geometry;
  std::vector<int> cell_indices;
  std::vector<std::uint8_t> membership;  // per-cell flag, same info as cell_indices

  bool contains(int cell_index) const {
    return membership[static_cast<std::size_t>(cell_index)] != 0;
  }
};

SweepPatch make_patch(const SweepAction& action, const GridGeometry& source_geometry);

struct PlannerConfig {
  double alpha_plus = 1.0;
  double alpha_minus = 100.0;
  int num_samples = 10;        // L edge draws per planning step
  double delta_refine = 0.02;  // end-point interpolation step (m)
  double delta_min = 0.04;     // shortest admissible sweep (m)
  double spatula_width = 0.07;
  double convergence_emd = 1e-4;  // below this the planner reports no action
  std::uint64_t seed = 0;

  void validate() const;
};

struct PushPrediction {
  Vec2 displacement;   // t_fw
  Vec2 predicted_end;  // cell center carried to the sweep's end edge
};

/// Simple push model: the cell's material keeps its cross-track offset and
/// ends on the sweep's end edge. Throws CellOutsidePatch for other cells.
PushPrediction push_prediction(const SweepPatch& patch, int cell_index);

/// Alignment reward minus overshoot penalty for transport edge (i, j):
///   r = alpha_plus * max(n_fw . t_edge, 0) + alpha_minus * min(n_fw . t_error, 0)
/// with t_edge = X_T,j - X_S,i and t_error = X_T,j - predicted_end(i), so the
/// min(.,0) term fires exactly when the push carries material past its
/// destination.
double edge_heuristic(const SweepPatch& patch, int source_index, int target_index,
                      const GridGeometry& target_geometry, const PlannerConfig& cfg);

/// Proxy score g(T, a): sum of T_ij * r(i, j) over plan entries whose source
/// cell lies in the sweep patch.
double sweep_score(const TransportPlan& plan, const SweepAction& action,
                   const PlannerConfig& cfg);

/// Draws cfg.num_samples edges (i, j) with probability proportional to T_ij,
/// with sub-delta_min edges discarded (the draw runs over the remaining
/// entries; an empty result means no admissible edge exists). Each edge
/// yields the full sweep X_S,i -> X_T,j followed by refinements whose end
/// points step along the edge at delta_refine, all no shorter than
/// delta_min. Sweep segments join cell centers and hence stay inside the
/// workspace; spatula overhang past a wall is truncated at the boundary
/// (patch membership covers existing cells only).
std::vector<SweepAction> sample_candidates(const TransportPlan& plan, const PlannerConfig& cfg,
                                           Rng& rng);

struct SweepSelection {
  std::vector<SweepAction> candidates;
  std::vector<double> scores;
  int best_index = -1;  // -1 when no candidate survived

  bool has_action() const { return best_index >= 0; }
  const SweepAction& best() const { return candidates[static_cast<std::size_t>(best_index)]; }
};

/// Scores every candidate and picks the argmax; ties keep the earliest
/// candidate in sampling order. Returns best_index = -1 when the plan is
/// already converged (cost <= convergence_emd) or no candidate survived.
SweepSelection rank_candidates(const TransportPlan& plan, const PlannerConfig& cfg, Rng& rng);

/// Next-best-sweep planner on a precomputed transport plan.
std::optional<SweepAction> next_best_sweep(const TransportPlan& plan, const PlannerConfig& cfg,
                                           Rng& rng);

/// Full pipeline: normalize both maps, solve OT with p = 1 ground cost, then
/// rank sampled candidates. Maps must share geometry and total mass (1e-6
/// relative).
std::optional<SweepAction> next_best_sweep(const HeightMap& source, const HeightMap& target,
                                           const PlannerConfig& cfg, Rng& rng);

/// MAX-OT baseline: the strongest transport edge between distinct cell
/// centers, ties broken by smallest (i, j). Throws NoNonTrivialEdge when all
/// positive entries are diagonal.
SweepAction baseline_max_ot(const TransportPlan& plan, const PlannerConfig& cfg);
SweepAction baseline_max_ot(const HeightMap& source, const HeightMap& target,
                            const PlannerConfig& cfg);

/// DIFF-MAP baseline: samples the sweep start from the normalized excess map
/// max(hS - hT, 0) and the end from the lack map max(hT - hS, 0), retrying
/// (up to 100 draws) while the sweep is shorter than delta_min. Throws
/// Converged when either difference map is all zero, SamplingExhausted after
/// the retry cap.
SweepAction baseline_diff_map(const HeightMap& source, const HeightMap& target,
                              const PlannerConfig& cfg, Rng& rng);

}  // namespace sweepot
