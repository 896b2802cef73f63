#include "sweepot/granular_sim.hpp"

#include <algorithm>
#include <cmath>

namespace sweepot {

void SimConfig::validate() const {
  if (!(pickup_fraction > 0.0) || pickup_fraction > 1.0)
    fail(ErrorCode::ConfigError, "pickup_fraction must lie in (0, 1]");
  if (trail_fraction < 0.0 || trail_fraction >= 1.0)
    fail(ErrorCode::ConfigError, "trail_fraction must lie in [0, 1)");
  if (deposit_spread_cells < 0)
    fail(ErrorCode::ConfigError, "deposit_spread_cells must be nonnegative");
  if (!(repose_ratio >= 0.0)) fail(ErrorCode::ConfigError, "repose_ratio must be nonnegative");
  if (relax_iterations < 0) fail(ErrorCode::ConfigError, "relax_iterations must be nonnegative");
  if (noise_std < 0.0) fail(ErrorCode::ConfigError, "noise_std must be nonnegative");
}

HeightMap repose_relax(const HeightMap& map, const SimConfig& cfg) {
  cfg.validate();
  const GridGeometry& g = map.geometry;
  const double limit = cfg.repose_ratio * g.cell_size;
  HeightMap current = map;
  HeightMap next = map;
  for (int pass = 0; pass < cfg.relax_iterations; ++pass) {
    next.heights = current.heights;
    for (int row = 0; row < g.height_cells; ++row) {
      for (int col = 0; col < g.width_cells; ++col) {
        const int i = g.index(row, col);
        const double h = current.heights[static_cast<std::size_t>(i)];
        int neighbors[4];
        int count = 0;
        if (row > 0) neighbors[count++] = g.index(row - 1, col);
        if (row + 1 < g.height_cells) neighbors[count++] = g.index(row + 1, col);
        if (col > 0) neighbors[count++] = g.index(row, col - 1);
        if (col + 1 < g.width_cells) neighbors[count++] = g.index(row, col + 1);
        double excess[4];
        int eligible = 0;
        for (int k = 0; k < count; ++k) {
          const double diff = h - current.heights[static_cast<std::size_t>(neighbors[k])];
          if (diff > limit) {
            excess[eligible] = diff - limit;
            neighbors[eligible] = neighbors[k];
            ++eligible;
          }
        }
        if (eligible == 0) continue;
        for (int k = 0; k < eligible; ++k) {
          const double moved = excess[k] / (2.0 * eligible);
          next.heights[static_cast<std::size_t>(i)] -= moved;
          next.heights[static_cast<std::size_t>(neighbors[k])] += moved;
        }
      }
    }
    std::swap(current.heights, next.heights);
  }
  return current;
}

SweepOutcome apply_sweep(const HeightMap& map, const SweepAction& action, const SimConfig& cfg,
                         Rng& rng) {
  cfg.validate();
  map.validate();
  const GridGeometry& g = map.geometry;

  if (!(action.length() > 0.0)) return {map, true};
  const SweepPatch patch = make_patch(action, g);
  if (patch.cell_indices.empty()) return {map, true};

  SweepOutcome outcome{map, false};
  HeightMap& out = outcome.map;
  const double mass_before = map.height_sum();

  // Pick up. A sweep that moves nothing is a no-op (no repose, no noise).
  double removed_total = 0.0;
  std::vector<double> removed(patch.cell_indices.size());
  for (std::size_t k = 0; k < patch.cell_indices.size(); ++k) {
    const std::size_t i = static_cast<std::size_t>(patch.cell_indices[k]);
    removed[k] = cfg.pickup_fraction * out.heights[i];
    out.heights[i] -= removed[k];
    removed_total += removed[k];
  }
  if (removed_total <= 0.0) return outcome;

  // Side spill back along the swept cells.
  const double trail_each =
      cfg.trail_fraction * removed_total / static_cast<double>(patch.cell_indices.size());
  for (const int i : patch.cell_indices) out.heights[static_cast<std::size_t>(i)] += trail_each;

  // Deposit the rest near the end edge, decaying with distance beyond it.
  // Each swept cell keeps its cross-track offset (the planner's push model);
  // destinations outside the grid clamp to the boundary cells.
  const double keep = 1.0 - cfg.trail_fraction;
  const int spread = cfg.deposit_spread_cells;
  double weight_total = 0.0;
  for (int k = 0; k <= spread; ++k) weight_total += static_cast<double>(spread + 1 - k);
  const Vec2 dir = patch.direction;
  const Vec2 lateral = dir.perp();
  const double len = action.length();
  for (std::size_t k = 0; k < patch.cell_indices.size(); ++k) {
    if (removed[k] <= 0.0) continue;
    const double deposit = keep * removed[k];
    const Vec2 rel = g.cell_center(patch.cell_indices[k]) - action.start;
    const double cross = rel.dot(lateral);
    for (int step = 0; step <= spread; ++step) {
      const double weight = static_cast<double>(spread + 1 - step) / weight_total;
      const Vec2 destination =
          action.start + dir * (len + step * g.cell_size) + lateral * cross;
      out.heights[static_cast<std::size_t>(g.cell_at(destination))] += deposit * weight;
    }
  }

  if (cfg.relax_iterations > 0) out = repose_relax(out, cfg);

  if (cfg.noise_std > 0.0) {
    const std::vector<double> pre_noise = out.heights;
    double noisy_total = 0.0;
    for (double& h : out.heights) {
      h *= std::max(0.0, 1.0 + cfg.noise_std * rng.gaussian());
      noisy_total += h;
    }
    if (noisy_total > 0.0) {
      const double scale = mass_before / noisy_total;
      for (double& h : out.heights) h *= scale;
    } else {
      out.heights = pre_noise;  // noise wiped everything; keep the pre-noise state
    }
  }
  return outcome;
}

SweepOutcome apply_sweep(const HeightMap& map, const SweepAction& action, const SimConfig& cfg) {
  Rng rng(cfg.seed);
  return apply_sweep(map, action, cfg, rng);
}

}  // namespace sweepot
