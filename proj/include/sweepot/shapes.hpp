#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sweepot/height_map.hpp"

namespace sweepot {

enum class SourceKind { OneBlob, TwoBlobs, FourBlobs, Gaussian, Uniform };

SourceKind parse_source_kind(const std::string& name);
const char* to_string(SourceKind kind);

struct ShapeDefaults {
  static constexpr double kOneBlobRadius = 0.10;
  static constexpr double kMultiBlobRadius = 0.07;
  static constexpr double kGaussianSigma = 0.10;
  static constexpr double kGatherRadius = 0.08;
  static constexpr double kSepRadius = 0.06;
  /// Fraction of the shorter workspace extent covered by the 7-row glyph box.
  static constexpr double kGlyphScale = 0.9;
};

/// Deterministic initial material distribution with the requested total
/// volume (m^3). Blob kinds place uniform-height discs at seeded random
/// centers lying fully inside the workspace; gaussian is a truncated
/// isotropic mound centered in the workspace; uniform spreads mass evenly.
HeightMap generate_source(SourceKind kind, const GridGeometry& geometry, double total_mass,
                          std::uint64_t seed);

/// Uniform-height disc target: cells whose centers lie within `radius` of
/// `center`. Throws InfeasibleGeometry when no cell qualifies.
HeightMap generate_target_gather(const GridGeometry& geometry, double total_mass, Vec2 center,
                                 double radius);

/// N disjoint disc clusters, each holding total_mass / centers.size().
/// Throws InfeasibleGeometry when clusters share a cell or any disc is empty.
HeightMap generate_target_sep(const GridGeometry& geometry, double total_mass,
                              const std::vector<Vec2>& centers, double radius);

/// Uniform-height rasterization of a 5x7 dot-matrix glyph scaled to the
/// workspace. Supported glyphs: E, T, H, A, S, L.
HeightMap generate_target_letter(const GridGeometry& geometry, double total_mass, char glyph);

/// Indices of cells whose centers lie within `radius` of `center`.
std::vector<int> disc_cells(const GridGeometry& geometry, Vec2 center, double radius);

/// Cell indices covered by the glyph's dot matrix (see generate_target_letter).
std::vector<int> rasterize_letter_cells(const GridGeometry& geometry, char glyph);

}  // namespace sweepot
