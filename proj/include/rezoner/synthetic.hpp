#pragma once

#include <cstdint>
#include <map>
#include <utility>

#include "rezoner/model.hpp"

namespace rezoner {

/// How the White share of children varies from the west edge (x = 0) to the
/// east edge (x = 1) of a synthetic district.
struct DemographicGradient {
  enum class Shape { Step, Linear };
  Shape shape = Shape::Linear;
  double west_white_share = 0.9;
  double east_white_share = 0.1;
  /// Each block's share is perturbed uniformly by up to +/- this amount.
  double block_noise = 0.0;
  /// Fraction of blocks that are single-race neighborhoods: their share is
  /// replaced by 1 or 0, drawn with the (noisy) share as probability.
  double homogeneous_blocks = 0.0;
  std::int64_t min_children = 5;
  std::int64_t max_children = 40;
  /// Fraction of census children enrolled at their zoned school.
  double enrollment_rate = 1.0;

  /// Left half entirely White, right half entirely non-White.
  static DemographicGradient step(double west = 1.0, double east = 0.0);
};

struct SyntheticLayout {
  /// Columns per row of the block grid; 1 is square, 4 a long east-west strip.
  double aspect = 1.0;
  /// 1 spreads schools evenly over the grid; smaller values pull them toward
  /// the center, leaving long trips from the outskirts.
  double school_spread = 1.0;
  /// Every this-many rows (and columns, with cross_arterials) a street is
  /// an arterial; 0 = none.
  std::size_t arterial_spacing = 0;
  bool cross_arterials = true;
  double street_speed_kmh = 30.0;
  double arterial_speed_kmh = 80.0;
};

/// Grid of blocks (row-major ids "b000", "b001", ...) with rook
/// adjacency, about 300 m per side. Schools ("s00", ...) sit near the
/// centers of an even tiling of the grid. Each block's baseline school is the
/// one nearest by driving time over the street grid (see
/// synthetic_travel_times), ties going to the smaller school id; zones are
/// shortest-path trees, hence contiguous. Child counts are drawn from the
/// gradient; enrollment is a fixed fraction of each zone's children, spread
/// back over blocks with allocate_students().
///
/// A pure function of its arguments. Throws std::invalid_argument unless
/// n_blocks >= n_schools >= 1 and the layout is sane.
District generate_synthetic_district(std::size_t n_blocks, std::size_t n_schools,
                                     const DemographicGradient& gradient, std::uint64_t seed,
                                     const SyntheticLayout& layout = {});

/// Driving seconds from every block to every school of a generated district
/// over its street grid: centroid to centroid along rook steps, arterials at
/// their own speed. Pass the layout used to generate it.
std::map<std::pair<BlockId, SchoolId>, double> synthetic_travel_times(const District& district,
                                                                      const SyntheticLayout& layout = {});

}  // namespace rezoner
