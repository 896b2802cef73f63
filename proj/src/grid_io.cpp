#include "sweepot/grid_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "sweepot/text.hpp"

namespace sweepot {
namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

[[noreturn]] void parse_fail(const std::string& name, int line, int column,
                             const std::string& what) {
  fail(ErrorCode::ParseError,
       name + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + what);
}

}  // namespace

HeightMap load_grid(std::istream& in, const std::string& name) {
  std::string line;
  if (!std::getline(in, line)) parse_fail(name, 1, 1, "missing header line");
  const auto header = split_commas(line);
  if (header.size() != 5) parse_fail(name, 1, 1, "header needs exactly 5 fields");

  GridGeometry geometry;
  double cells_x = 0.0, cells_y = 0.0;
  if (!parse_double(header[0], cells_x) || cells_x < 1.0 || cells_x != std::floor(cells_x))
    parse_fail(name, 1, 1, "cells_x must be a positive integer");
  if (!parse_double(header[1], cells_y) || cells_y < 1.0 || cells_y != std::floor(cells_y))
    parse_fail(name, 1, 2, "cells_y must be a positive integer");
  geometry.width_cells = static_cast<int>(cells_x);
  geometry.height_cells = static_cast<int>(cells_y);
  if (!parse_double(header[2], geometry.cell_size) || !(geometry.cell_size > 0.0))
    parse_fail(name, 1, 3, "cell_size_m must be positive");
  if (!parse_double(header[3], geometry.origin.x)) parse_fail(name, 1, 4, "bad origin_x_m");
  if (!parse_double(header[4], geometry.origin.y)) parse_fail(name, 1, 5, "bad origin_y_m");

  HeightMap map = HeightMap::zeros(geometry);
  for (int row = 0; row < geometry.height_cells; ++row) {
    if (!std::getline(in, line))
      parse_fail(name, row + 2, 1, "unexpected end of file: expected a height row");
    const auto fields = split_commas(line);
    if (fields.size() != static_cast<std::size_t>(geometry.width_cells))
      parse_fail(name, row + 2, static_cast<int>(fields.size()),
                 "expected " + std::to_string(geometry.width_cells) + " heights, got " +
                     std::to_string(fields.size()));
    for (int col = 0; col < geometry.width_cells; ++col) {
      double h = 0.0;
      if (!parse_double(fields[static_cast<std::size_t>(col)], h))
        parse_fail(name, row + 2, col + 1, "bad height value");
      if (h < 0.0)
        fail(ErrorCode::NegativeHeight, name + ":" + std::to_string(row + 2) + ":" +
                                            std::to_string(col + 1) + ": negative height");
      map.heights[static_cast<std::size_t>(geometry.index(row, col))] = h;
    }
  }
  while (std::getline(in, line)) {
    bool blank = true;
    for (const char c : line)
      if (c != ' ' && c != '\t' && c != '\r') blank = false;
    if (!blank) parse_fail(name, geometry.height_cells + 2, 1, "trailing content after grid rows");
  }
  return map;
}

HeightMap load_grid(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.is_open()) fail(ErrorCode::ParseError, path + ": cannot open file");
  return load_grid(in, path);
}

void save_grid(const HeightMap& map, std::ostream& out) {
  map.validate();
  const GridGeometry& g = map.geometry;
  out << g.width_cells << ',' << g.height_cells << ',' << format_double(g.cell_size) << ','
      << format_double(g.origin.x) << ',' << format_double(g.origin.y) << '\n';
  for (int row = 0; row < g.height_cells; ++row) {
    for (int col = 0; col < g.width_cells; ++col) {
      if (col > 0) out << ',';
      out << format_double(map.heights[static_cast<std::size_t>(g.index(row, col))]);
    }
    out << '\n';
  }
}

void save_grid(const HeightMap& map, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out.is_open()) fail(ErrorCode::ParseError, path + ": cannot open file for writing");
  save_grid(map, out);
  out.flush();
  if (!out.good()) fail(ErrorCode::ParseError, path + ": write failed");
}

}  // namespace sweepot
