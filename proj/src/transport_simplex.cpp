#include "transport_simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sweepot::detail {
namespace {

constexpr double kReducedCostTol = 1e-12;

struct Tableau {
  int n = 0;
  int m = 0;
  const std::vector<double>* cost = nullptr;
  std::vector<TransportArc> basis;
  std::vector<std::vector<int>> adjacency;  // node -> basis slots; cols offset by n
  std::vector<double> u, v;
  std::vector<int> parent_node, parent_slot;
  std::vector<char> visited;

  double c(int i, int j) const {
    return (*cost)[static_cast<std::size_t>(i) * static_cast<std::size_t>(m) +
                   static_cast<std::size_t>(j)];
  }

  void build_northwest_basis(std::vector<double> supply, std::vector<double> demand) {
    basis.reserve(static_cast<std::size_t>(n + m - 1));
    int i = 0, j = 0;
    while (true) {
      double f = std::min(supply[static_cast<std::size_t>(i)], demand[static_cast<std::size_t>(j)]);
      if (f < 0.0) f = 0.0;
      basis.push_back({i, j, f});
      supply[static_cast<std::size_t>(i)] -= f;
      demand[static_cast<std::size_t>(j)] -= f;
      if (i == n - 1 && j == m - 1) break;
      if (i < n - 1 &&
          (j == m - 1 || supply[static_cast<std::size_t>(i)] <= demand[static_cast<std::size_t>(j)]))
        ++i;
      else
        ++j;
    }
    adjacency.assign(static_cast<std::size_t>(n + m), {});
    for (int slot = 0; slot < static_cast<int>(basis.size()); ++slot) {
      adjacency[static_cast<std::size_t>(basis[static_cast<std::size_t>(slot)].row)].push_back(slot);
      adjacency[static_cast<std::size_t>(n + basis[static_cast<std::size_t>(slot)].col)].push_back(
          slot);
    }
  }

  // Tree propagation of u_i + v_j = c_ij over basic arcs, rooted at row 0.
  void compute_potentials() {
    u.assign(static_cast<std::size_t>(n), 0.0);
    v.assign(static_cast<std::size_t>(m), 0.0);
    std::fill(visited.begin(), visited.end(), 0);
    static thread_local std::vector<int> stack;
    stack.clear();
    stack.push_back(0);
    visited[0] = 1;
    while (!stack.empty()) {
      const int node = stack.back();
      stack.pop_back();
      for (const int slot : adjacency[static_cast<std::size_t>(node)]) {
        const TransportArc& arc = basis[static_cast<std::size_t>(slot)];
        const int other = node < n ? n + arc.col : arc.row;
        if (visited[static_cast<std::size_t>(other)]) continue;
        visited[static_cast<std::size_t>(other)] = 1;
        if (other >= n)
          v[static_cast<std::size_t>(arc.col)] = c(arc.row, arc.col) - u[static_cast<std::size_t>(arc.row)];
        else
          u[static_cast<std::size_t>(arc.row)] = c(arc.row, arc.col) - v[static_cast<std::size_t>(arc.col)];
        stack.push_back(other);
      }
    }
  }

  double reduced_cost(std::int64_t arc) const {
    const int i = static_cast<int>(arc / m);
    const int j = static_cast<int>(arc % m);
    return c(i, j) - u[static_cast<std::size_t>(i)] - v[static_cast<std::size_t>(j)];
  }

  // Block pricing: most negative reduced cost within the first block (after
  // the previous stop) that contains any candidate. Bland mode takes the
  // first candidate in index order instead, which cannot cycle.
  bool find_entering(std::int64_t& scan_pos, std::int64_t block, bool bland, std::int64_t& out) {
    const std::int64_t arc_count = static_cast<std::int64_t>(n) * m;
    if (bland) {
      for (std::int64_t a = 0; a < arc_count; ++a)
        if (reduced_cost(a) < -kReducedCostTol) {
          out = a;
          return true;
        }
      return false;
    }
    std::int64_t examined = 0;
    while (examined < arc_count) {
      double best = -kReducedCostTol;
      std::int64_t best_arc = -1;
      const std::int64_t stop = std::min(block, arc_count - examined);
      for (std::int64_t k = 0; k < stop; ++k) {
        const std::int64_t a = scan_pos;
        scan_pos = scan_pos + 1 == arc_count ? 0 : scan_pos + 1;
        const double rc = reduced_cost(a);
        if (rc < best) {
          best = rc;
          best_arc = a;
        }
      }
      examined += stop;
      if (best_arc >= 0) {
        out = best_arc;
        return true;
      }
    }
    return false;
  }

  // Unique tree path from row node `ei` to col node n + ej.
  void find_cycle(int ei, int ej, std::vector<int>& path_slots) {
    std::fill(visited.begin(), visited.end(), 0);
    static thread_local std::vector<int> queue;
    queue.clear();
    queue.push_back(ei);
    visited[static_cast<std::size_t>(ei)] = 1;
    parent_node[static_cast<std::size_t>(ei)] = -1;
    const int target = n + ej;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const int node = queue[head];
      if (node == target) break;
      for (const int slot : adjacency[static_cast<std::size_t>(node)]) {
        const TransportArc& arc = basis[static_cast<std::size_t>(slot)];
        const int other = node < n ? n + arc.col : arc.row;
        if (visited[static_cast<std::size_t>(other)]) continue;
        visited[static_cast<std::size_t>(other)] = 1;
        parent_node[static_cast<std::size_t>(other)] = node;
        parent_slot[static_cast<std::size_t>(other)] = slot;
        queue.push_back(other);
      }
    }
    path_slots.clear();
    for (int node = target; parent_node[static_cast<std::size_t>(node)] != -1;
         node = parent_node[static_cast<std::size_t>(node)])
      path_slots.push_back(parent_slot[static_cast<std::size_t>(node)]);
    // path_slots now runs from the arc incident to col ej down to row ei.
  }

  void pivot(int ei, int ej, const std::vector<int>& path_slots) {
    // Walking the path from col ej toward row ei, arcs at even positions
    // lose theta, odd positions gain it.
    double theta = std::numeric_limits<double>::infinity();
    int leaving = -1;
    for (std::size_t t = 0; t < path_slots.size(); t += 2) {
      const double flow = basis[static_cast<std::size_t>(path_slots[t])].flow;
      if (flow < theta) {
        theta = flow;
        leaving = path_slots[t];
      }
    }
    for (std::size_t t = 0; t < path_slots.size(); ++t) {
      TransportArc& arc = basis[static_cast<std::size_t>(path_slots[t])];
      if (t % 2 == 0) {
        arc.flow -= theta;
        if (arc.flow < 0.0) arc.flow = 0.0;
      } else {
        arc.flow += theta;
      }
    }
    TransportArc& out = basis[static_cast<std::size_t>(leaving)];
    detach(leaving, out.row, n + out.col);
    out = {ei, ej, theta};
    adjacency[static_cast<std::size_t>(ei)].push_back(leaving);
    adjacency[static_cast<std::size_t>(n + ej)].push_back(leaving);
  }

  void detach(int slot, int a, int b) {
    for (const int node : {a, b}) {
      auto& list = adjacency[static_cast<std::size_t>(node)];
      for (std::size_t k = 0; k < list.size(); ++k)
        if (list[k] == slot) {
          list[k] = list.back();
          list.pop_back();
          break;
        }
    }
  }
};

}  // namespace

TransportSolution solve_transport(const std::vector<double>& supply,
                                  const std::vector<double>& demand,
                                  const std::vector<double>& cost) {
  const int n = static_cast<int>(supply.size());
  const int m = static_cast<int>(demand.size());
  if (n == 0 || m == 0) fail(ErrorCode::EmptyInput, "transportation problem with empty side");
  if (cost.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(m))
    fail(ErrorCode::DimensionMismatch, "cost matrix size mismatch");

  Tableau t;
  t.n = n;
  t.m = m;
  t.cost = &cost;
  t.visited.assign(static_cast<std::size_t>(n + m), 0);
  t.parent_node.assign(static_cast<std::size_t>(n + m), -1);
  t.parent_slot.assign(static_cast<std::size_t>(n + m), -1);
  t.build_northwest_basis(supply, demand);

  const std::int64_t arc_count = static_cast<std::int64_t>(n) * m;
  const std::int64_t block =
      std::max<std::int64_t>(64, static_cast<std::int64_t>(std::sqrt(static_cast<double>(arc_count))));
  const std::int64_t bland_after = 500LL * (n + m) + 100000;
  const std::int64_t hard_cap = 100LL * bland_after;

  std::int64_t scan_pos = 0;
  std::vector<int> path_slots;
  for (std::int64_t pivots = 0;; ++pivots) {
    if (pivots > hard_cap)
      fail(ErrorCode::Internal, "network simplex failed to terminate");
    t.compute_potentials();
    std::int64_t entering = -1;
    if (!t.find_entering(scan_pos, block, pivots > bland_after, entering)) break;
    const int ei = static_cast<int>(entering / m);
    const int ej = static_cast<int>(entering % m);
    t.find_cycle(ei, ej, path_slots);
    t.pivot(ei, ej, path_slots);
  }

  TransportSolution solution;
  solution.basis = std::move(t.basis);
  solution.row_potential = std::move(t.u);
  solution.col_potential = std::move(t.v);
  double total = 0.0;
  for (const TransportArc& arc : solution.basis) total += arc.flow * t.c(arc.row, arc.col);
  solution.cost = total;
  return solution;
}

}  // namespace sweepot::detail
