#pragma once

#include <cstdint>

#include "sweepot/height_map.hpp"
#include "sweepot/rng.hpp"
#include "sweepot/sweep_planner.hpp"

namespace sweepot {

/// Height-map surrogate dynamics. Deliberately richer than the planner's
/// one-cell push model (side spill, deposit smearing, repose slumping,
/// multiplicative noise) so the closed loop faces unmodeled dynamics; the
/// degenerate config (pickup 1, trail 0, spread 0, repose off, noise 0)
/// reproduces the push model exactly.
struct SimConfig {
  double pickup_fraction = 0.9;  // (0, 1]: share of swept material that moves
  double trail_fraction = 0.15;  // [0, 1): share of moved material spilled back
  int deposit_spread_cells = 6;  // deposit carry beyond the end edge (momentum)
  double repose_ratio = 0.8;     // max stable height difference per cell pitch
  int relax_iterations = 10;     // repose passes; 0 disables
  double noise_std = 0.02;       // multiplicative height noise, renormalized
  std::uint64_t seed = 0;

  void validate() const;
};

struct SweepOutcome {
  HeightMap map;
  bool degenerate = false;  // sweep covered zero cells; map is the input
};

/// Applies one sweep: picks up pickup_fraction of the material under the
/// spatula, spills trail_fraction of it back along the swept cells, deposits
/// the rest near the end edge (weights decaying with distance beyond it),
/// then relaxes slopes and optionally perturbs heights. Mass is conserved to
/// 1e-9 relative; the workspace boundary acts as a wall.
SweepOutcome apply_sweep(const HeightMap& map, const SweepAction& action, const SimConfig& cfg,
                         Rng& rng);

/// Seeds the noise stream from cfg.seed.
SweepOutcome apply_sweep(const HeightMap& map, const SweepAction& action, const SimConfig& cfg);

/// Slope relaxation: for relax_iterations passes, every cell sends each
/// lower 4-neighbor whose height difference exceeds repose_ratio * cell_size
/// half of the excess, split equally among such neighbors.
HeightMap repose_relax(const HeightMap& map, const SimConfig& cfg);

}  // namespace sweepot
