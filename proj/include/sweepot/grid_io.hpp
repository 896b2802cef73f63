#pragma once

#include <iosfwd>
#include <string>

#include "sweepot/height_map.hpp"

namespace sweepot {

// Grid file format (plain text, comma separated, LF endings):
//   line 1: cells_x,cells_y,cell_size_m,origin_x_m,origin_y_m
//   then cells_y lines of cells_x nonnegative heights in meters, row 0 first.

HeightMap load_grid(const std::string& path);
HeightMap load_grid(std::istream& in, const std::string& name);

void save_grid(const HeightMap& map, const std::string& path);
void save_grid(const HeightMap& map, std::ostream& out);

}  // namespace sweepot
