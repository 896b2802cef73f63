#include "sweepot/height_map.hpp"

#include <cmath>
#include <string>

namespace sweepot {

double HeightMap::height_sum() const {
  double sum = 0.0;
  for (const double h : heights) sum += h;
  return sum;
}

double HeightMap::max_height() const {
  double best = 0.0;
  for (const double h : heights) best = h > best ? h : best;
  return best;
}

void HeightMap::validate() const {
  geometry.validate();
  if (heights.size() != static_cast<std::size_t>(geometry.num_cells()))
    fail(ErrorCode::DimensionMismatch,
         "height map has " + std::to_string(heights.size()) + " entries for " +
             std::to_string(geometry.num_cells()) + " cells");
  for (std::size_t i = 0; i < heights.size(); ++i) {
    if (!std::isfinite(heights[i]))
      fail(ErrorCode::InvalidArgument, "non-finite height at cell " + std::to_string(i));
    if (heights[i] < 0.0)
      fail(ErrorCode::NegativeHeight, "negative height at cell " + std::to_string(i));
  }
}

void NormalizedDistribution::validate() const {
  geometry.validate();
  if (weights.size() != static_cast<std::size_t>(geometry.num_cells()))
    fail(ErrorCode::DimensionMismatch, "weight count does not match cell count");
  double sum = 0.0;
  for (const double w : weights) {
    if (!(w >= 0.0)) fail(ErrorCode::InvalidArgument, "negative or non-finite weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    fail(ErrorCode::UnbalancedMass, "weights sum to " + std::to_string(sum) + ", expected 1");
}

NormalizedDistribution normalize(const HeightMap& map) {
  const double sum = map.height_sum();
  if (sum <= 0.0) fail(ErrorCode::ZeroMass, "height map holds no material");
  NormalizedDistribution out{map.geometry, map.heights};
  for (double& w : out.weights) w /= sum;
  return out;
}

}  // namespace sweepot
