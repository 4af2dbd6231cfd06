#include "rezoner/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rezoner/errors.hpp"
#include "rezoner/travel.hpp"

namespace rezoner::geo {

using nlohmann::json;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

Ring ring_from_json(const json& coords, const std::string& subject) {
  if (!coords.is_array()) throw GeometryError(subject, "ring must be an array of positions");
  Ring ring;
  for (const auto& pos : coords) {
    if (!pos.is_array() || pos.size() < 2 || !pos[0].is_number() || !pos[1].is_number()) {
      throw GeometryError(subject, "position must be [lon, lat]");
    }
    ring.push_back({pos[1].get<double>(), pos[0].get<double>()});
  }
  return ring;
}

Polygon polygon_from_json(const json& coords, const std::string& subject) {
  if (!coords.is_array() || coords.empty()) throw GeometryError(subject, "polygon needs at least one ring");
  Polygon p;
  p.outer = ring_from_json(coords[0], subject);
  for (std::size_t i = 1; i < coords.size(); ++i) p.holes.push_back(ring_from_json(coords[i], subject));
  return p;
}

json ring_to_json(const Ring& ring) {
  json arr = json::array();
  for (const auto& p : ring) arr.push_back({p.lon, p.lat});
  return arr;
}

double cross(const ProjectedPoint& o, const ProjectedPoint& a, const ProjectedPoint& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool on_segment(const ProjectedPoint& p, const ProjectedPoint& a, const ProjectedPoint& b) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

bool segments_intersect(const ProjectedPoint& a, const ProjectedPoint& b, const ProjectedPoint& c,
                        const ProjectedPoint& d) {
  const double d1 = cross(c, d, a);
  const double d2 = cross(c, d, b);
  const double d3 = cross(a, b, c);
  const double d4 = cross(a, b, d);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return true;
  if (d1 == 0 && on_segment(a, c, d)) return true;
  if (d2 == 0 && on_segment(b, c, d)) return true;
  if (d3 == 0 && on_segment(c, a, b)) return true;
  if (d4 == 0 && on_segment(d, a, b)) return true;
  return false;
}

void repair_ring(Ring& ring, const std::string& subject) {
  Ring cleaned;
  for (const auto& p : ring) {
    if (!std::isfinite(p.lat) || !std::isfinite(p.lon)) throw GeometryError(subject, "non-finite coordinate");
    if (cleaned.empty() || !(cleaned.back() == p)) cleaned.push_back(p);
  }
  if (cleaned.size() > 1 && cleaned.front() == cleaned.back()) cleaned.pop_back();
  if (cleaned.size() < 3) throw GeometryError(subject, "ring has fewer than three distinct vertices");

  std::vector<ProjectedPoint> pts;
  for (const auto& p : cleaned) pts.push_back(project(p));
  const std::size_t n = pts.size();
  double twice_area = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = pts[i];
    const auto& b = pts[(i + 1) % n];
    twice_area += a.x * b.y - b.x * a.y;
  }
  if (twice_area == 0.0) throw GeometryError(subject, "ring has zero area");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;  // edges share the closing vertex
      if (segments_intersect(pts[i], pts[(i + 1) % n], pts[j], pts[(j + 1) % n])) {
        throw GeometryError(subject, "ring self-intersects");
      }
    }
  }
  cleaned.push_back(cleaned.front());
  ring = std::move(cleaned);
}

bool ring_contains(const Ring& ring, const LatLon& p) {
  bool inside = false;
  for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++) {
    const auto& a = ring[i];
    const auto& b = ring[j];
    if ((a.lat > p.lat) != (b.lat > p.lat)) {
      const double lon_at = (b.lon - a.lon) * (p.lat - a.lat) / (b.lat - a.lat) + a.lon;
      if (p.lon < lon_at) inside = !inside;
    }
  }
  return inside;
}

// Signed area and first moments of a closed ring in projected space.
struct RingMoments {
  double area = 0.0;
  double cx = 0.0;
  double cy = 0.0;
};

RingMoments ring_moments(const Ring& ring) {
  RingMoments m;
  for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
    const auto a = project(ring[i]);
    const auto b = project(ring[i + 1]);
    const double c = a.x * b.y - b.x * a.y;
    m.area += c / 2.0;
    m.cx += (a.x + b.x) * c / 6.0;
    m.cy += (a.y + b.y) * c / 6.0;
  }
  return m;
}

}  // namespace

ProjectedPoint project(const LatLon& p) {
  return {kEarthRadiusMeters * p.lon * kDeg, kEarthRadiusMeters * std::sin(p.lat * kDeg)};
}

LatLon unproject(const ProjectedPoint& p) {
  return {std::asin(std::clamp(p.y / kEarthRadiusMeters, -1.0, 1.0)) / kDeg, p.x / kEarthRadiusMeters / kDeg};
}

MultiPolygon multipolygon_from_geojson(const json& geometry, const std::string& subject) {
  if (!geometry.is_object() || !geometry.contains("type") || !geometry.contains("coordinates")) {
    throw GeometryError(subject, "expected a GeoJSON geometry object");
  }
  const auto type = geometry.at("type").get<std::string>();
  const auto& coords = geometry.at("coordinates");
  MultiPolygon out;
  if (type == "Polygon") {
    out.push_back(polygon_from_json(coords, subject));
  } else if (type == "MultiPolygon") {
    if (!coords.is_array()) throw GeometryError(subject, "MultiPolygon coordinates must be an array");
    for (const auto& poly : coords) out.push_back(polygon_from_json(poly, subject));
  } else {
    throw GeometryError(subject, "unsupported geometry type '" + type + "'");
  }
  if (out.empty()) throw GeometryError(subject, "empty MultiPolygon");
  return out;
}

json multipolygon_to_geojson(const MultiPolygon& shape) {
  auto poly_json = [](const Polygon& p) {
    json rings = json::array({ring_to_json(p.outer)});
    for (const auto& h : p.holes) rings.push_back(ring_to_json(h));
    return rings;
  };
  if (shape.size() == 1) return {{"type", "Polygon"}, {"coordinates", poly_json(shape[0])}};
  json polys = json::array();
  for (const auto& p : shape) polys.push_back(poly_json(p));
  return {{"type", "MultiPolygon"}, {"coordinates", polys}};
}

void repair(MultiPolygon& shape, const std::string& subject) {
  if (shape.empty()) throw GeometryError(subject, "no polygons");
  for (auto& poly : shape) {
    repair_ring(poly.outer, subject);
    for (auto& h : poly.holes) repair_ring(h, subject);
  }
}

bool contains(const MultiPolygon& shape, const LatLon& point) {
  for (const auto& poly : shape) {
    if (!ring_contains(poly.outer, point)) continue;
    bool in_hole = false;
    for (const auto& h : poly.holes) {
      if (ring_contains(h, point)) {
        in_hole = true;
        break;
      }
    }
    if (!in_hole) return true;
  }
  return false;
}

double area_m2(const MultiPolygon& shape) {
  double total = 0.0;
  for (const auto& poly : shape) {
    total += std::abs(ring_moments(poly.outer).area);
    for (const auto& h : poly.holes) total -= std::abs(ring_moments(h).area);
  }
  return total;
}

LatLon centroid(const MultiPolygon& shape) {
  double a = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  auto add = [&](const Ring& ring, double sign) {
    auto m = ring_moments(ring);
    // Normalize orientation so outer rings add and holes subtract.
    const double s = (m.area < 0 ? -1.0 : 1.0) * sign;
    a += s * m.area;
    cx += s * m.cx;
    cy += s * m.cy;
  };
  for (const auto& poly : shape) {
    add(poly.outer, 1.0);
    for (const auto& h : poly.holes) add(h, -1.0);
  }
  if (a == 0.0) return shape.front().outer.front();
  return unproject({cx / a, cy / a});
}

MultiPolygon rectangle(const LatLon& sw, const LatLon& ne) {
  Polygon p;
  p.outer = {sw, {sw.lat, ne.lon}, ne, {ne.lat, sw.lon}, sw};
  return {p};
}

}  // namespace rezoner::geo
