#include "sweepot/shapes.hpp"

#include <array>
#include <cmath>

#include "sweepot/rng.hpp"

namespace sweepot {
namespace {

// 5x7 dot-matrix glyphs, row 0 at the top, bit 4 = leftmost column.
struct Glyph {
  char name;
  std::array<std::uint8_t, 7> rows;
};

constexpr std::array<Glyph, 6> kFont = {{
    {'E', {0b11111, 0b10000, 0b10000, 0b11110, 0b10000, 0b10000, 0b11111}},
    {'T', {0b11111, 0b00100, 0b00100, 0b00100, 0b00100, 0b00100, 0b00100}},
    {'H', {0b10001, 0b10001, 0b10001, 0b11111, 0b10001, 0b10001, 0b10001}},
    {'A', {0b01110, 0b10001, 0b10001, 0b11111, 0b10001, 0b10001, 0b10001}},
    {'S', {0b01111, 0b10000, 0b10000, 0b01110, 0b00001, 0b00001, 0b11110}},
    {'L', {0b10000, 0b10000, 0b10000, 0b10000, 0b10000, 0b10000, 0b11111}},
}};

const Glyph* find_glyph(char name) {
  for (const Glyph& g : kFont)
    if (g.name == name) return &g;
  return nullptr;
}

// Scales heights so the map's volume equals total_mass.
void set_total_mass(HeightMap& map, double total_mass) {
  const double current = map.total_mass();
  if (current <= 0.0) fail(ErrorCode::InfeasibleGeometry, "generated shape covers no cells");
  const double scale = total_mass / current;
  for (double& h : map.heights) h *= scale;
}

void add_disc(HeightMap& map, Vec2 center, double radius, double volume) {
  const std::vector<int> cells = disc_cells(map.geometry, center, radius);
  if (cells.empty()) fail(ErrorCode::InfeasibleGeometry, "disc rasterizes to zero cells");
  const double cell_area = map.geometry.cell_size * map.geometry.cell_size;
  const double height = volume / (cell_area * static_cast<double>(cells.size()));
  for (const int i : cells) map.heights[static_cast<std::size_t>(i)] += height;
}

Vec2 sample_disc_center(const GridGeometry& g, double radius, Rng& rng) {
  const double lo_x = g.min_x() + radius;
  const double hi_x = g.max_x() - radius;
  const double lo_y = g.min_y() + radius;
  const double hi_y = g.max_y() - radius;
  if (lo_x >= hi_x || lo_y >= hi_y)
    fail(ErrorCode::InfeasibleGeometry, "blob radius does not fit inside the workspace");
  return {rng.uniform(lo_x, hi_x), rng.uniform(lo_y, hi_y)};
}

HeightMap blobs(const GridGeometry& g, double total_mass, int count, double radius,
                std::uint64_t seed) {
  Rng rng(seed);
  HeightMap map = HeightMap::zeros(g);
  for (int b = 0; b < count; ++b)
    add_disc(map, sample_disc_center(g, radius, rng), radius, total_mass / count);
  set_total_mass(map, total_mass);
  return map;
}

}  // namespace

SourceKind parse_source_kind(const std::string& name) {
  if (name == "one_blob") return SourceKind::OneBlob;
  if (name == "two_blobs") return SourceKind::TwoBlobs;
  if (name == "four_blobs") return SourceKind::FourBlobs;
  if (name == "gaussian") return SourceKind::Gaussian;
  if (name == "uniform") return SourceKind::Uniform;
  fail(ErrorCode::ConfigError, "unknown source kind '" + name + "'");
}

const char* to_string(SourceKind kind) {
  switch (kind) {
    case SourceKind::OneBlob: return "one_blob";
    case SourceKind::TwoBlobs: return "two_blobs";
    case SourceKind::FourBlobs: return "four_blobs";
    case SourceKind::Gaussian: return "gaussian";
    case SourceKind::Uniform: return "uniform";
  }
  return "?";
}

std::vector<int> disc_cells(const GridGeometry& g, Vec2 center, double radius) {
  std::vector<int> cells;
  const double r2 = radius * radius;
  for (int i = 0; i < g.num_cells(); ++i) {
    const Vec2 d = g.cell_center(i) - center;
    if (d.dot(d) <= r2) cells.push_back(i);
  }
  return cells;
}

HeightMap generate_source(SourceKind kind, const GridGeometry& geometry, double total_mass,
                          std::uint64_t seed) {
  geometry.validate();
  if (!(total_mass > 0.0)) fail(ErrorCode::InvalidArgument, "total_mass must be positive");
  switch (kind) {
    case SourceKind::OneBlob:
      return blobs(geometry, total_mass, 1, ShapeDefaults::kOneBlobRadius, seed);
    case SourceKind::TwoBlobs:
      return blobs(geometry, total_mass, 2, ShapeDefaults::kMultiBlobRadius, seed);
    case SourceKind::FourBlobs:
      return blobs(geometry, total_mass, 4, ShapeDefaults::kMultiBlobRadius, seed);
    case SourceKind::Gaussian: {
      HeightMap map = HeightMap::zeros(geometry);
      const Vec2 center = geometry.workspace_center();
      const double inv_two_sigma2 =
          1.0 / (2.0 * ShapeDefaults::kGaussianSigma * ShapeDefaults::kGaussianSigma);
      for (int i = 0; i < geometry.num_cells(); ++i) {
        const Vec2 d = geometry.cell_center(i) - center;
        map.heights[static_cast<std::size_t>(i)] = std::exp(-d.dot(d) * inv_two_sigma2);
      }
      set_total_mass(map, total_mass);
      return map;
    }
    case SourceKind::Uniform: {
      HeightMap map = HeightMap::zeros(geometry);
      const double cell_area = geometry.cell_size * geometry.cell_size;
      const double height = total_mass / (cell_area * geometry.num_cells());
      for (double& h : map.heights) h = height;
      return map;
    }
  }
  fail(ErrorCode::InvalidArgument, "unknown source kind");
}

HeightMap generate_target_gather(const GridGeometry& geometry, double total_mass, Vec2 center,
                                 double radius) {
  geometry.validate();
  if (!(total_mass > 0.0)) fail(ErrorCode::InvalidArgument, "total_mass must be positive");
  HeightMap map = HeightMap::zeros(geometry);
  add_disc(map, center, radius, total_mass);
  set_total_mass(map, total_mass);
  return map;
}

HeightMap generate_target_sep(const GridGeometry& geometry, double total_mass,
                              const std::vector<Vec2>& centers, double radius) {
  geometry.validate();
  if (!(total_mass > 0.0)) fail(ErrorCode::InvalidArgument, "total_mass must be positive");
  if (centers.empty()) fail(ErrorCode::InvalidArgument, "sep target needs at least one center");
  std::vector<char> taken(static_cast<std::size_t>(geometry.num_cells()), 0);
  for (const Vec2& c : centers) {
    const std::vector<int> cells = disc_cells(geometry, c, radius);
    if (cells.empty()) fail(ErrorCode::InfeasibleGeometry, "sep disc rasterizes to zero cells");
    for (const int i : cells) {
      if (taken[static_cast<std::size_t>(i)])
        fail(ErrorCode::InfeasibleGeometry, "sep discs overlap");
      taken[static_cast<std::size_t>(i)] = 1;
    }
  }
  HeightMap map = HeightMap::zeros(geometry);
  const double per_cluster = total_mass / static_cast<double>(centers.size());
  for (const Vec2& c : centers) add_disc(map, c, radius, per_cluster);
  return map;
}

std::vector<int> rasterize_letter_cells(const GridGeometry& g, char glyph) {
  const Glyph* spec = find_glyph(glyph);
  if (spec == nullptr)
    fail(ErrorCode::InfeasibleGeometry, std::string("unsupported glyph '") + glyph + "'");
  const double extent = g.extent_x() < g.extent_y() ? g.extent_x() : g.extent_y();
  const double dot = ShapeDefaults::kGlyphScale * extent / 7.0;
  const Vec2 center = g.workspace_center();
  const double left = center.x - 2.5 * dot;
  const double top = center.y + 3.5 * dot;
  std::vector<int> cells;
  for (int i = 0; i < g.num_cells(); ++i) {
    const Vec2 p = g.cell_center(i);
    const int col = static_cast<int>(std::floor((p.x - left) / dot));
    const int row = static_cast<int>(std::floor((top - p.y) / dot));
    if (col < 0 || col >= 5 || row < 0 || row >= 7) continue;
    if (spec->rows[static_cast<std::size_t>(row)] & (1u << (4 - col))) cells.push_back(i);
  }
  return cells;
}

HeightMap generate_target_letter(const GridGeometry& geometry, double total_mass, char glyph) {
  geometry.validate();
  if (!(total_mass > 0.0)) fail(ErrorCode::InvalidArgument, "total_mass must be positive");
  const std::vector<int> cells = rasterize_letter_cells(geometry, glyph);
  if (cells.empty()) fail(ErrorCode::InfeasibleGeometry, "glyph rasterizes to zero cells");
  HeightMap map = HeightMap::zeros(geometry);
  const double cell_area = geometry.cell_size * geometry.cell_size;
  const double height = total_mass / (cell_area * static_cast<double>(cells.size()));
  for (const int i : cells) map.heights[static_cast<std::size_t>(i)] = height;
  return map;
}

}  // namespace sweepot
