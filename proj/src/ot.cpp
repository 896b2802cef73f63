#include "sweepot/ot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <utility>

#include "sweepot/text.hpp"
#include "transport_simplex.hpp"

namespace sweepot {
namespace {

constexpr double kBalanceTol = 1e-6;

void check_inputs(const NormalizedDistribution& source, const NormalizedDistribution& target,
                  const GroundCost& cost) {
  if (static_cast<int>(source.weights.size()) != cost.rows ||
      static_cast<int>(target.weights.size()) != cost.cols)
    fail(ErrorCode::DimensionMismatch, "cost matrix does not match distribution supports");
  double sum_s = 0.0, sum_t = 0.0;
  for (const double w : source.weights) sum_s += w;
  for (const double w : target.weights) sum_t += w;
  if (std::abs(sum_s - sum_t) > kBalanceTol)
    fail(ErrorCode::UnbalancedMass, "distribution masses differ by " +
                                        format_double(std::abs(sum_s - sum_t)));
}

// Tree solve of the flows for one spanning-tree basis: peel leaves, each leaf
// arc must carry the leaf's remaining supply/demand. Used by the oracle only.
bool tree_flows(int n, int m, const std::vector<std::pair<int, int>>& arcs,
                const std::vector<double>& supply, const std::vector<double>& demand,
                std::vector<double>& flows) {
  const int nodes = n + m;
  std::vector<double> residual(static_cast<std::size_t>(nodes), 0.0);
  for (int i = 0; i < n; ++i) residual[static_cast<std::size_t>(i)] = supply[static_cast<std::size_t>(i)];
  for (int j = 0; j < m; ++j) residual[static_cast<std::size_t>(n + j)] = demand[static_cast<std::size_t>(j)];
  std::vector<std::vector<int>> adjacency(static_cast<std::size_t>(nodes));
  for (int a = 0; a < static_cast<int>(arcs.size()); ++a) {
    adjacency[static_cast<std::size_t>(arcs[static_cast<std::size_t>(a)].first)].push_back(a);
    adjacency[static_cast<std::size_t>(n + arcs[static_cast<std::size_t>(a)].second)].push_back(a);
  }
  flows.assign(arcs.size(), 0.0);
  std::vector<char> arc_done(arcs.size(), 0);
  std::vector<int> degree(static_cast<std::size_t>(nodes), 0);
  for (int node = 0; node < nodes; ++node)
    degree[static_cast<std::size_t>(node)] = static_cast<int>(adjacency[static_cast<std::size_t>(node)].size());
  std::vector<int> leaves;
  for (int node = 0; node < nodes; ++node)
    if (degree[static_cast<std::size_t>(node)] == 1) leaves.push_back(node);
  constexpr double kFeasTol = 1e-12;
  for (std::size_t head = 0; head < leaves.size(); ++head) {
    const int node = leaves[head];
    int slot = -1;
    for (const int a : adjacency[static_cast<std::size_t>(node)])
      if (!arc_done[static_cast<std::size_t>(a)]) slot = a;
    if (slot < 0) continue;  // last two nodes share the final arc
    const double f = residual[static_cast<std::size_t>(node)];
    if (f < -kFeasTol) return false;
    flows[static_cast<std::size_t>(slot)] = f < 0.0 ? 0.0 : f;
    arc_done[static_cast<std::size_t>(slot)] = 1;
    const auto [row, col] = arcs[static_cast<std::size_t>(slot)];
    const int other = node < n ? n + col : row;
    residual[static_cast<std::size_t>(node)] = 0.0;
    residual[static_cast<std::size_t>(other)] -= f;
    if (--degree[static_cast<std::size_t>(other)] == 1) leaves.push_back(other);
  }
  for (int node = 0; node < nodes; ++node)
    if (std::abs(residual[static_cast<std::size_t>(node)]) > 1e-9) return false;
  return true;
}

void finalize_plan(TransportPlan& plan, const GroundCost& cost) {
  std::sort(plan.entries.begin(), plan.entries.end(), [](const PlanEntry& a, const PlanEntry& b) {
    return a.source_index != b.source_index ? a.source_index < b.source_index
                                            : a.target_index < b.target_index;
  });
  double total = 0.0;
  for (const PlanEntry& e : plan.entries) total += e.mass * cost.at(e.source_index, e.target_index);
  plan.cost = total;
}

}  // namespace

GroundCost ground_cost(const GridGeometry& source, const GridGeometry& target, double p) {
  source.validate();
  target.validate();
  if (!(p >= 1.0)) fail(ErrorCode::InvalidArgument, "ground cost exponent must satisfy p >= 1");
  GroundCost cost;
  cost.source_geometry = source;
  cost.target_geometry = target;
  cost.rows = source.num_cells();
  cost.cols = target.num_cells();
  cost.exponent = p;
  cost.costs.resize(static_cast<std::size_t>(cost.rows) * static_cast<std::size_t>(cost.cols));
  for (int i = 0; i < cost.rows; ++i) {
    const Vec2 a = source.cell_center(i);
    for (int j = 0; j < cost.cols; ++j) {
      const double d = (a - target.cell_center(j)).norm();
      cost.costs[static_cast<std::size_t>(i) * static_cast<std::size_t>(cost.cols) +
                 static_cast<std::size_t>(j)] = p == 1.0 ? d : std::pow(d, p);
    }
  }
  return cost;
}

double TransportPlan::total_mass() const {
  double sum = 0.0;
  for (const PlanEntry& e : entries) sum += e.mass;
  return sum;
}

TransportPlan solve_ot(const NormalizedDistribution& source, const NormalizedDistribution& target,
                       const GroundCost& cost) {
  check_inputs(source, target, cost);

  // Prune zero-weight cells; the simplex sees only active supports.
  std::vector<int> active_rows, active_cols;
  for (int i = 0; i < cost.rows; ++i)
    if (source.weights[static_cast<std::size_t>(i)] > 0.0) active_rows.push_back(i);
  for (int j = 0; j < cost.cols; ++j)
    if (target.weights[static_cast<std::size_t>(j)] > 0.0) active_cols.push_back(j);
  if (active_rows.empty() || active_cols.empty())
    fail(ErrorCode::ZeroMass, "a distribution has empty support");

  std::vector<double> supply(active_rows.size()), demand(active_cols.size());
  for (std::size_t i = 0; i < active_rows.size(); ++i)
    supply[i] = source.weights[static_cast<std::size_t>(active_rows[i])];
  for (std::size_t j = 0; j < active_cols.size(); ++j)
    demand[j] = target.weights[static_cast<std::size_t>(active_cols[j])];

  std::vector<double> pruned_cost(active_rows.size() * active_cols.size());
  for (std::size_t i = 0; i < active_rows.size(); ++i)
    for (std::size_t j = 0; j < active_cols.size(); ++j)
      pruned_cost[i * active_cols.size() + j] = cost.at(active_rows[i], active_cols[j]);

  const detail::TransportSolution solution = detail::solve_transport(supply, demand, pruned_cost);

  TransportPlan plan;
  plan.source_geometry = cost.source_geometry;
  plan.target_geometry = cost.target_geometry;
  plan.source_marginal = source.weights;
  plan.target_marginal = target.weights;
  plan.source_potential.assign(source.weights.size(), 0.0);
  plan.target_potential.assign(target.weights.size(), 0.0);
  for (std::size_t i = 0; i < active_rows.size(); ++i)
    plan.source_potential[static_cast<std::size_t>(active_rows[i])] = solution.row_potential[i];
  for (std::size_t j = 0; j < active_cols.size(); ++j)
    plan.target_potential[static_cast<std::size_t>(active_cols[j])] = solution.col_potential[j];
  for (const detail::TransportArc& arc : solution.basis)
    if (arc.flow > 0.0)
      plan.entries.push_back({active_rows[static_cast<std::size_t>(arc.row)],
                              active_cols[static_cast<std::size_t>(arc.col)], arc.flow});
  finalize_plan(plan, cost);
  return plan;
}

double emd(const NormalizedDistribution& source, const NormalizedDistribution& target, double p) {
  const GroundCost cost = ground_cost(source.geometry, target.geometry, p);
  const double value = solve_ot(source, target, cost).cost;
  return p == 1.0 ? value : std::pow(value, 1.0 / p);
}

TransportPlan brute_force_ot(const NormalizedDistribution& source,
                             const NormalizedDistribution& target, const GroundCost& cost) {
  check_inputs(source, target, cost);
  const int n = cost.rows;
  const int m = cost.cols;
  if (n > 4 || m > 4)
    fail(ErrorCode::TooLarge, "brute-force oracle supports at most 4x4 instances");

  // Every vertex of the transportation polytope is the flow of some spanning
  // tree with n + m - 1 arcs; enumerate all arc subsets of that size.
  const int arc_count = n * m;
  const int tree_size = n + m - 1;
  std::vector<int> pick(static_cast<std::size_t>(tree_size));
  for (int k = 0; k < tree_size; ++k) pick[static_cast<std::size_t>(k)] = k;

  double best_cost = std::numeric_limits<double>::infinity();
  std::vector<std::pair<int, int>> best_arcs;
  std::vector<double> best_flows;

  std::vector<std::pair<int, int>> arcs(static_cast<std::size_t>(tree_size));
  std::vector<double> flows;
  std::vector<int> uf(static_cast<std::size_t>(n + m));

  const auto find_root = [&uf](int x) {
    while (uf[static_cast<std::size_t>(x)] != x) {
      uf[static_cast<std::size_t>(x)] = uf[static_cast<std::size_t>(uf[static_cast<std::size_t>(x)])];
      x = uf[static_cast<std::size_t>(x)];
    }
    return x;
  };

  while (true) {
    // Spanning-tree test via union-find.
    for (int node = 0; node < n + m; ++node) uf[static_cast<std::size_t>(node)] = node;
    bool acyclic = true;
    for (int k = 0; k < tree_size && acyclic; ++k) {
      const int a = pick[static_cast<std::size_t>(k)];
      const int i = a / m;
      const int j = a % m;
      arcs[static_cast<std::size_t>(k)] = {i, j};
      const int ra = find_root(i);
      const int rb = find_root(n + j);
      if (ra == rb)
        acyclic = false;
      else
        uf[static_cast<std::size_t>(ra)] = rb;
    }
    if (acyclic && tree_flows(n, m, arcs, source.weights, target.weights, flows)) {
      double total = 0.0;
      for (int k = 0; k < tree_size; ++k)
        total += flows[static_cast<std::size_t>(k)] *
                 cost.at(arcs[static_cast<std::size_t>(k)].first, arcs[static_cast<std::size_t>(k)].second);
      if (total < best_cost - 1e-15) {
        best_cost = total;
        best_arcs = arcs;
        best_flows = flows;
      }
    }
    // Next combination in lexicographic order.
    int k = tree_size - 1;
    while (k >= 0 && pick[static_cast<std::size_t>(k)] == arc_count - tree_size + k) --k;
    if (k < 0) break;
    ++pick[static_cast<std::size_t>(k)];
    for (int t = k + 1; t < tree_size; ++t)
      pick[static_cast<std::size_t>(t)] = pick[static_cast<std::size_t>(t - 1)] + 1;
  }

  if (!std::isfinite(best_cost))
    fail(ErrorCode::Internal, "no feasible basis found (unbalanced inputs?)");

  TransportPlan plan;
  plan.source_geometry = cost.source_geometry;
  plan.target_geometry = cost.target_geometry;
  plan.source_marginal = source.weights;
  plan.target_marginal = target.weights;

  // Duals from the optimal tree: u_i + v_j = c_ij on tree arcs, u_0 = 0.
  plan.source_potential.assign(static_cast<std::size_t>(n), 0.0);
  plan.target_potential.assign(static_cast<std::size_t>(m), 0.0);
  {
    std::vector<char> row_known(static_cast<std::size_t>(n), 0), col_known(static_cast<std::size_t>(m), 0);
    row_known[0] = 1;
    bool progress = true;
    while (progress) {
      progress = false;
      for (const auto& [i, j] : best_arcs) {
        if (row_known[static_cast<std::size_t>(i)] && !col_known[static_cast<std::size_t>(j)]) {
          plan.target_potential[static_cast<std::size_t>(j)] =
              cost.at(i, j) - plan.source_potential[static_cast<std::size_t>(i)];
          col_known[static_cast<std::size_t>(j)] = 1;
          progress = true;
        } else if (!row_known[static_cast<std::size_t>(i)] && col_known[static_cast<std::size_t>(j)]) {
          plan.source_potential[static_cast<std::size_t>(i)] =
              cost.at(i, j) - plan.target_potential[static_cast<std::size_t>(j)];
          row_known[static_cast<std::size_t>(i)] = 1;
          progress = true;
        }
      }
    }
  }

  for (std::size_t k = 0; k < best_arcs.size(); ++k)
    if (best_flows[k] > 0.0)
      plan.entries.push_back({best_arcs[k].first, best_arcs[k].second, best_flows[k]});
  finalize_plan(plan, cost);
  return plan;
}

void dump_plan_csv(const TransportPlan& plan, std::ostream& out) {
  out << "i,j,mass\n";
  for (const PlanEntry& e : plan.entries)
    out << e.source_index << ',' << e.target_index << ',' << format_double(e.mass) << '\n';
}

double max_marginal_violation(const TransportPlan& plan) {
  std::vector<double> row_sum(plan.source_marginal.size(), 0.0);
  std::vector<double> col_sum(plan.target_marginal.size(), 0.0);
  for (const PlanEntry& e : plan.entries) {
    row_sum[static_cast<std::size_t>(e.source_index)] += e.mass;
    col_sum[static_cast<std::size_t>(e.target_index)] += e.mass;
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < row_sum.size(); ++i)
    worst = std::max(worst, std::abs(row_sum[i] - plan.source_marginal[i]));
  for (std::size_t j = 0; j < col_sum.size(); ++j)
    worst = std::max(worst, std::abs(col_sum[j] - plan.target_marginal[j]));
  return worst;
}

double max_dual_violation(const TransportPlan& plan, const GroundCost& cost) {
  double worst = 0.0;
  for (int i = 0; i < cost.rows; ++i) {
    if (!(plan.source_marginal[static_cast<std::size_t>(i)] > 0.0)) continue;
    for (int j = 0; j < cost.cols; ++j) {
      if (!(plan.target_marginal[static_cast<std::size_t>(j)] > 0.0)) continue;
      const double slack = plan.source_potential[static_cast<std::size_t>(i)] +
                           plan.target_potential[static_cast<std::size_t>(j)] - cost.at(i, j);
      worst = std::max(worst, slack);  // dual feasibility: u_i + v_j <= c_ij
    }
  }
  for (const PlanEntry& e : plan.entries) {
    const double gap = std::abs(cost.at(e.source_index, e.target_index) -
                                plan.source_potential[static_cast<std::size_t>(e.source_index)] -
                                plan.target_potential[static_cast<std::size_t>(e.target_index)]);
    worst = std::max(worst, gap);
  }
  return worst;
}

}  // namespace sweepot
