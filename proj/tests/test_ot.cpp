#include <doctest.h>

#include <cmath>

#include "support/oracles.hpp"

using namespace sweepot;
using namespace sweepot::testing;

namespace {

GridGeometry line_grid(int cells, double pitch = 0.1) {
  GridGeometry g;
  g.width_cells = cells;
  g.height_cells = 1;
  g.cell_size = pitch;
  g.origin = {pitch / 2.0, pitch / 2.0};
  return g;
}

GridGeometry square_grid(int side, double pitch = 0.02) {
  GridGeometry g;
  g.width_cells = side;
  g.height_cells = side;
  g.cell_size = pitch;
  g.origin = {pitch / 2.0, pitch / 2.0};
  return g;
}

NormalizedDistribution dist_of(const GridGeometry& g, std::vector<double> weights) {
  return {g, std::move(weights)};
}

}  // namespace

TEST_SUITE("ot") {

TEST_CASE("ground cost basics") {
  const GridGeometry g = line_grid(2, 0.02);
  const GroundCost c1 = ground_cost(g, g, 1.0);
  CHECK(c1.at(0, 0) == 0.0);
  CHECK(c1.at(1, 1) == 0.0);
  CHECK(c1.at(0, 1) == doctest::Approx(0.02).epsilon(1e-12));
  CHECK(c1.at(1, 0) == doctest::Approx(0.02).epsilon(1e-12));

  const GroundCost c2 = ground_cost(g, g, 2.0);
  CHECK(c2.at(0, 1) == doctest::Approx(0.0004).epsilon(1e-12));

  CHECK_THROWS_AS(ground_cost(g, g, 0.5), Error);
}

TEST_CASE("identical distributions transport at zero cost") {
  const GridGeometry g = square_grid(4);
  Rng rng(5);
  const NormalizedDistribution d = random_distribution(g, rng);
  const GroundCost cost = ground_cost(g, g, 1.0);
  const TransportPlan plan = solve_ot(d, d, cost);
  CHECK(plan.cost <= 1e-12);
  CHECK(max_marginal_violation(plan) <= 1e-7);
}

TEST_CASE("single mass moves along the only feasible edge") {
  const GridGeometry g = line_grid(2);
  const GroundCost cost = ground_cost(g, g, 1.0);
  const TransportPlan plan =
      solve_ot(dist_of(g, {1.0, 0.0}), dist_of(g, {0.0, 1.0}), cost);
  REQUIRE(plan.entries.size() == 1);
  CHECK(plan.entries[0].source_index == 0);
  CHECK(plan.entries[0].target_index == 1);
  CHECK(plan.entries[0].mass == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(plan.cost == doctest::Approx(0.1).epsilon(1e-9));
}

TEST_CASE("collinear split: hand-computed 0.15") {
  // source [0.5, 0.5, 0], target [0, 0, 1] on 3 cells 0.1 m apart:
  // 0.5 * 0.2 + 0.5 * 0.1 = 0.15
  const GridGeometry g = line_grid(3);
  const GroundCost cost = ground_cost(g, g, 1.0);
  const TransportPlan plan =
      solve_ot(dist_of(g, {0.5, 0.5, 0.0}), dist_of(g, {0.0, 0.0, 1.0}), cost);
  CHECK(plan.cost == doctest::Approx(0.15).epsilon(1e-9));
  const TransportPlan oracle =
      brute_force_ot(dist_of(g, {0.5, 0.5, 0.0}), dist_of(g, {0.0, 0.0, 1.0}), cost);
  CHECK(oracle.cost == doctest::Approx(0.15).epsilon(1e-9));
}

TEST_CASE("brute force: 1x1 and 2x2 closed forms") {
  const GridGeometry g1 = line_grid(1);
  const GroundCost cost1 = ground_cost(g1, g1, 1.0);
  const TransportPlan tiny = brute_force_ot(dist_of(g1, {1.0}), dist_of(g1, {1.0}), cost1);
  REQUIRE(tiny.entries.size() == 1);
  CHECK(tiny.cost == doctest::Approx(cost1.at(0, 0)).epsilon(1e-12));

  // 2x2: one free variable t = T_00 in [max(0, a0 - b1), min(a0, b0)];
  // cost is linear in t, so the optimum sits at an endpoint.
  const GridGeometry g2 = line_grid(2);
  const GroundCost cost2 = ground_cost(g2, g2, 1.0);
  Rng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const double a0 = rng.uniform(0.05, 0.95);
    const double b0 = rng.uniform(0.05, 0.95);
    const auto source = dist_of(g2, {a0, 1.0 - a0});
    const auto target = dist_of(g2, {b0, 1.0 - b0});
    const double lo = std::max(0.0, a0 - (1.0 - b0));
    const double hi = std::min(a0, b0);
    const auto cost_at = [&](double t) {
      return t * cost2.at(0, 0) + (a0 - t) * cost2.at(0, 1) + (b0 - t) * cost2.at(1, 0) +
             (1.0 - a0 - b0 + t) * cost2.at(1, 1);
    };
    const double expected = std::min(cost_at(lo), cost_at(hi));
    const TransportPlan plan = brute_force_ot(source, target, cost2);
    CHECK(plan.cost == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("solver agrees with the brute-force oracle on 200 random 3x3 instances") {
  const GridGeometry strip = line_grid(3, 0.07);
  const GroundCost cost = ground_cost(strip, strip, 1.0);
  Rng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const NormalizedDistribution source = random_distribution(strip, rng, 0.25);
    const NormalizedDistribution target = random_distribution(strip, rng, 0.25);
    const TransportPlan fast = solve_ot(source, target, cost);
    const TransportPlan oracle = brute_force_ot(source, target, cost);
    CHECK(std::abs(fast.cost - oracle.cost) <= 1e-7);
    CHECK(max_marginal_violation(fast) <= 1e-7);
  }
}

TEST_CASE("oracle rejects instances beyond its cap") {
  const GridGeometry g = line_grid(5);
  const GroundCost cost = ground_cost(g, g, 1.0);
  NormalizedDistribution d = dist_of(g, {0.2, 0.2, 0.2, 0.2, 0.2});
  try {
    brute_force_ot(d, d, cost);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooLarge);
  }
}

TEST_CASE("vertex solutions stay sparse and dual-feasible") {
  const GridGeometry g = square_grid(6, 0.03);
  const GroundCost cost = ground_cost(g, g, 1.0);
  Rng rng(31);
  for (int trial = 0; trial < 25; ++trial) {
    const NormalizedDistribution source = random_distribution(g, rng);
    const NormalizedDistribution target = random_distribution(g, rng);
    const TransportPlan plan = solve_ot(source, target, cost);
    int active_rows = 0, active_cols = 0;
    for (const double w : source.weights) active_rows += w > 0.0 ? 1 : 0;
    for (const double w : target.weights) active_cols += w > 0.0 ? 1 : 0;
    CHECK(static_cast<int>(plan.entries.size()) <= active_rows + active_cols - 1);
    CHECK(max_marginal_violation(plan) <= 1e-7);
    CHECK(max_dual_violation(plan, cost) <= 1e-7);
    CHECK(plan.cost <= greedy_feasible_cost(source, target, cost) + 1e-9);
  }
}

TEST_CASE("emd identities and translation invariance") {
  const GridGeometry g = square_grid(10);
  Rng rng(8);
  const NormalizedDistribution d = random_distribution(g, rng);
  CHECK(emd(d, d) <= 1e-12);

  // point mass moved 0.1 m
  const GridGeometry strip = line_grid(2);
  CHECK(emd(dist_of(strip, {1.0, 0.0}), dist_of(strip, {0.0, 1.0})) ==
        doctest::Approx(0.1).epsilon(1e-9));

  // translate both distributions by (3, 2) cells on a larger grid
  const GridGeometry big = square_grid(16);
  auto embed = [&](const NormalizedDistribution& src, int dr, int dc) {
    NormalizedDistribution out{big,
                               std::vector<double>(static_cast<std::size_t>(big.num_cells()), 0.0)};
    for (int r = 0; r < g.height_cells; ++r)
      for (int c = 0; c < g.width_cells; ++c)
        out.weights[static_cast<std::size_t>(big.index(r + dr, c + dc))] =
            src.weights[static_cast<std::size_t>(g.index(r, c))];
    return out;
  };
  const NormalizedDistribution a = random_distribution(g, rng);
  const NormalizedDistribution b = random_distribution(g, rng);
  const double base = emd(embed(a, 0, 0), embed(b, 0, 0));
  const double shifted = emd(embed(a, 2, 3), embed(b, 2, 3));
  CHECK(shifted == doctest::Approx(base).epsilon(1e-9));
}

TEST_CASE("emd metric axioms on random triples") {
  const GridGeometry g = square_grid(5, 0.04);
  const GroundCost cost = ground_cost(g, g, 1.0);
  Rng rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    const NormalizedDistribution a = random_distribution(g, rng);
    const NormalizedDistribution b = random_distribution(g, rng);
    const NormalizedDistribution c = random_distribution(g, rng);
    const double ab = solve_ot(a, b, cost).cost;
    const double ba = solve_ot(b, a, cost).cost;
    const double ac = solve_ot(a, c, cost).cost;
    const double cb = solve_ot(c, b, cost).cost;
    CHECK(std::abs(ab - ba) <= 1e-7);
    CHECK(ab <= ac + cb + 1e-7);
  }
}

TEST_CASE("mismatched inputs are rejected") {
  const GridGeometry g2 = line_grid(2);
  const GridGeometry g3 = line_grid(3);
  const GroundCost cost = ground_cost(g2, g2, 1.0);
  try {
    solve_ot(dist_of(g3, {0.5, 0.25, 0.25}), dist_of(g2, {0.5, 0.5}), cost);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionMismatch);
  }
  try {
    solve_ot(dist_of(g2, {0.5, 0.5}), dist_of(g2, {0.5, 0.4}), cost);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnbalancedMass);
  }
}

}  // TEST_SUITE
