#pragma once

// Network simplex specialized to the dense transportation problem. Internal
// to the OT module; callers go through solve_ot().

#include <cstdint>
#include <vector>

#include "sweepot/error.hpp"

namespace sweepot::detail {

struct TransportArc {
  int row = 0;
  int col = 0;
  double flow = 0.0;
};

struct TransportSolution {
  std::vector<TransportArc> basis;  // n + m - 1 arcs, zero flows included
  std::vector<double> row_potential;
  std::vector<double> col_potential;
  double cost = 0.0;
};

/// Solves min sum f_ij c_ij s.t. row sums = supply, col sums = demand,
/// f >= 0. Supplies and demands must be strictly positive with equal totals
/// (tiny float imbalance is absorbed by the last basic arc). `cost` is row
/// major with stride = demand count.
TransportSolution solve_transport(const std::vector<double>& supply,
                                  const std::vector<double>& demand,
                                  const std::vector<double>& cost);

}  // namespace sweepot::detail
