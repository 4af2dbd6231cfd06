#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rezoner/model.hpp"

namespace rezoner::geo {

/// Closed ring: first vertex repeated at the end.
using Ring = std::vector<LatLon>;

struct Polygon {
  Ring outer;
  std::vector<Ring> holes;
};

using MultiPolygon = std::vector<Polygon>;

/// Lambert cylindrical equal-area coordinates in meters.
struct ProjectedPoint {
  double x = 0.0;
  double y = 0.0;
};

ProjectedPoint project(const LatLon& p);
LatLon unproject(const ProjectedPoint& p);

/// Parses a GeoJSON Polygon or MultiPolygon geometry object.
/// Throws GeometryError naming `subject`.
MultiPolygon multipolygon_from_geojson(const nlohmann::json& geometry, const std::string& subject);
nlohmann::json multipolygon_to_geojson(const MultiPolygon& shape);

/// Closes open rings and drops repeated vertices. Throws GeometryError when
/// a ring is degenerate or self-intersecting, since neither can be repaired
/// without guessing at intent.
void repair(MultiPolygon& shape, const std::string& subject);

/// Even-odd containment honoring holes.
bool contains(const MultiPolygon& shape, const LatLon& point);

/// Area in square meters, computed in the equal-area projection.
double area_m2(const MultiPolygon& shape);

/// Area-weighted centroid in the equal-area projection.
LatLon centroid(const MultiPolygon& shape);

/// Square cell polygon, counter-clockwise from the south-west corner.
MultiPolygon rectangle(const LatLon& south_west, const LatLon& north_east);

}  // namespace rezoner::geo
