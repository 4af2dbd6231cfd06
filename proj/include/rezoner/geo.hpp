#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "rezoner/geometry.hpp"
#include "rezoner/model.hpp"

namespace rezoner::geo {

/// A school's attendance zone polygon with its precomputed area.
struct BoundaryPolygon {
  SchoolId school_id;
  MultiPolygon shape;
  double area_m2 = 0.0;
};

using BoundaryPolygonSet = std::vector<BoundaryPolygon>;

/// Repairs every shape and computes its equal-area size.
/// Throws GeometryError naming the school with unrepairable geometry.
BoundaryPolygonSet make_boundary_set(std::vector<std::pair<SchoolId, MultiPolygon>> shapes);

struct BaselineAssignment {
  AssignmentPlan plan;
  /// Blocks whose centroid falls in no zone; excluded from the district.
  std::vector<BlockId> unassigned;
  /// Blocks whose centroid fell inside more than one zone.
  std::vector<BlockId> overlapped;
};

/// Centroid-in-polygon zoning. Overlaps resolve to the smallest zone by
/// area, then to the smaller school id.
BaselineAssignment assign_blocks_to_schools(const std::map<BlockId, LatLon>& block_centroids,
                                            const BoundaryPolygonSet& boundaries);

struct Adjacency {
  std::map<BlockId, std::vector<BlockId>> neighbors;  // every input block has an entry
  std::vector<BlockId> isolated;
};

/// Rook adjacency: blocks are adjacent iff their boundaries share a segment
/// of positive length. Touching at a corner does not count.
Adjacency build_adjacency(const std::map<BlockId, MultiPolygon>& block_polygons);

/// A GeoJSON FeatureCollection reduced to (id property, shape) pairs.
struct Feature {
  std::string id;
  MultiPolygon shape;
  nlohmann::json geometry;
};

/// Throws InputError if the file is not a FeatureCollection or a feature
/// lacks `id_property`.
std::vector<Feature> read_feature_collection(const std::filesystem::path& path, const std::string& id_property);
std::vector<Feature> features_from_json(const nlohmann::json& collection, const std::string& id_property,
                                        const std::string& source);

}  // namespace rezoner::geo
