#pragma once

#include <iosfwd>
#include <vector>

#include "sweepot/height_map.hpp"

namespace sweepot {

/// Dense per-pair transport cost: costs[i * cols + j] = ||X_S,i - X_T,j||^p.
struct GroundCost {
  GridGeometry source_geometry;
  GridGeometry target_geometry;
  int rows = 0;
  int cols = 0;
  double exponent = 1.0;
  std::vector<double> costs;

  double at(int i, int j) const {
    return costs[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols) +
                 static_cast<std::size_t>(j)];
  }
};

/// Requires p >= 1. p = 1 (plain Euclidean distance) is the planner's metric.
GroundCost ground_cost(const GridGeometry& source, const GridGeometry& target, double p = 1.0);

struct PlanEntry {
  int source_index = 0;
  int target_index = 0;
  double mass = 0.0;
};

/// Sparse optimal coupling between two normalized distributions. Entries are
/// the strictly positive T_ij sorted by (i, j); a vertex solution carries at
/// most N_S + N_T - 1 of them. Potentials are the LP duals; they are
/// meaningful on the support of the marginals (zero-weight cells keep 0).
struct TransportPlan {
  GridGeometry source_geometry;
  GridGeometry target_geometry;
  std::vector<PlanEntry> entries;
  double cost = 0.0;
  std::vector<double> source_marginal;
  std::vector<double> target_marginal;
  std::vector<double> source_potential;
  std::vector<double> target_potential;

  double total_mass() const;
};

/// Exact minimum-cost coupling (transportation LP solved with a network
/// simplex on the spanning-tree basis). Zero-weight cells are pruned before
/// the solve and never appear in the result.
TransportPlan solve_ot(const NormalizedDistribution& source, const NormalizedDistribution& target,
                       const GroundCost& cost);

/// p-Wasserstein distance: OT(source, target; C_p)^(1/p). For p = 1 this is
/// the earth mover's distance in meters.
double emd(const NormalizedDistribution& source, const NormalizedDistribution& target,
           double p = 1.0);

/// Independent oracle: enumerates every spanning-tree basis of the
/// transportation polytope and returns the cheapest feasible vertex.
/// Restricted to N_S <= 4 and N_T <= 4 (TooLarge otherwise).
TransportPlan brute_force_ot(const NormalizedDistribution& source,
                             const NormalizedDistribution& target, const GroundCost& cost);

/// Debug dump: one `i,j,mass` line per entry.
void dump_plan_csv(const TransportPlan& plan, std::ostream& out);

/// Largest absolute row/column-sum deviation from the stored marginals.
double max_marginal_violation(const TransportPlan& plan);

/// Optimality certificate residual: max of dual infeasibility
/// (u_i + v_j - c_ij over cells with positive marginals) and complementary
/// slackness (|c_ij - u_i - v_j| over plan entries).
double max_dual_violation(const TransportPlan& plan, const GroundCost& cost);

}  // namespace sweepot
