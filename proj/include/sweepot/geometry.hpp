#pragma once

#include <cmath>

#include "sweepot/error.hpp"

namespace sweepot {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double norm() const { return std::sqrt(x * x + y * y); }
  /// Counter-clockwise perpendicular.
  Vec2 perp() const { return {-y, x}; }
  bool operator==(const Vec2&) const = default;
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }

/// Regular grid over a rectangular workspace. `origin` is the center of cell
/// (row 0, col 0); cell (r, c) is centered at origin + (c, r) * cell_size.
/// Cells are indexed row-major.
struct GridGeometry {
  int width_cells = 25;
  int height_cells = 25;
  double cell_size = 0.02;
  Vec2 origin{0.01, 0.01};

  int num_cells() const { return width_cells * height_cells; }
  int index(int row, int col) const { return row * width_cells + col; }
  int row_of(int i) const { return i / width_cells; }
  int col_of(int i) const { return i % width_cells; }

  Vec2 cell_center(int row, int col) const {
    return {origin.x + col * cell_size, origin.y + row * cell_size};
  }
  Vec2 cell_center(int i) const { return cell_center(row_of(i), col_of(i)); }

  // Workspace bounds: outer edges of the boundary cells.
  double min_x() const { return origin.x - 0.5 * cell_size; }
  double max_x() const { return origin.x + (width_cells - 0.5) * cell_size; }
  double min_y() const { return origin.y - 0.5 * cell_size; }
  double max_y() const { return origin.y + (height_cells - 0.5) * cell_size; }
  double extent_x() const { return width_cells * cell_size; }
  double extent_y() const { return height_cells * cell_size; }
  Vec2 workspace_center() const {
    return {0.5 * (min_x() + max_x()), 0.5 * (min_y() + max_y())};
  }

  bool contains(Vec2 p, double slack = 0.0) const {
    return p.x >= min_x() - slack && p.x <= max_x() + slack && p.y >= min_y() - slack &&
           p.y <= max_y() + slack;
  }

  /// Index of the cell whose center is nearest to p, clamped to the grid.
  int cell_at(Vec2 p) const {
    int col = static_cast<int>(std::lround((p.x - origin.x) / cell_size));
    int row = static_cast<int>(std::lround((p.y - origin.y) / cell_size));
    col = col < 0 ? 0 : (col >= width_cells ? width_cells - 1 : col);
    row = row < 0 ? 0 : (row >= height_cells ? height_cells - 1 : row);
    return index(row, col);
  }

  bool operator==(const GridGeometry&) const = default;

  void validate() const {
    if (width_cells < 1 || height_cells < 1)
      fail(ErrorCode::InvalidArgument, "grid must have at least one cell per axis");
    if (!(cell_size > 0.0))
      fail(ErrorCode::InvalidArgument, "cell_size must be positive");
  }
};

}  // namespace sweepot
