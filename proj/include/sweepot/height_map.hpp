#pragma once

#include <vector>

#include "sweepot/geometry.hpp"

namespace sweepot {

/// Discrete height map: nonnegative material height (meters) per grid cell,
/// row-major. Material volume of a cell is height * cell_size^2.
struct HeightMap {
  GridGeometry geometry;
  std::vector<double> heights;

  static HeightMap zeros(const GridGeometry& geometry) {
    return {geometry, std::vector<double>(static_cast<std::size_t>(geometry.num_cells()), 0.0)};
  }

  double height_sum() const;
  /// Total material volume in m^3.
  double total_mass() const { return height_sum() * geometry.cell_size * geometry.cell_size; }
  double max_height() const;

  /// Checks size, finiteness and non-negativity of every entry.
  void validate() const;
};

/// Height map rescaled into a probability distribution: weights sum to 1.
struct NormalizedDistribution {
  GridGeometry geometry;
  std::vector<double> weights;

  void validate() const;
};

/// weights_i = heights_i / sum(heights). Throws ZeroMass when the map holds
/// no material.
NormalizedDistribution normalize(const HeightMap& map);

}  // namespace sweepot
