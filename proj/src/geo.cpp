#include "rezoner/geo.hpp"

#include <algorithm>
#include <cmath>

#include "rezoner/errors.hpp"
#include "rezoner/district_io.hpp"

namespace rezoner::geo {

namespace {

// Projected-space tolerance (meters) for shared-edge detection.
constexpr double kEdgeTolerance = 0.01;

struct Segment {
  ProjectedPoint a;
  ProjectedPoint b;
};

struct Box {
  double min_x, min_y, max_x, max_y;
};

std::vector<Segment> segments_of(const MultiPolygon& shape) {
  std::vector<Segment> out;
  auto add_ring = [&](const Ring& ring) {
    for (std::size_t i = 0; i + 1 < ring.size(); ++i) out.push_back({project(ring[i]), project(ring[i + 1])});
  };
  for (const auto& poly : shape) {
    add_ring(poly.outer);
    for (const auto& h : poly.holes) add_ring(h);
  }
  return out;
}

Box box_of(const std::vector<Segment>& segs) {
  Box b{INFINITY, INFINITY, -INFINITY, -INFINITY};
  for (const auto& s : segs) {
    for (const auto& p : {s.a, s.b}) {
      b.min_x = std::min(b.min_x, p.x);
      b.min_y = std::min(b.min_y, p.y);
      b.max_x = std::max(b.max_x, p.x);
      b.max_y = std::max(b.max_y, p.y);
    }
  }
  return b;
}

// Length of the collinear overlap between two segments; 0 when they are not
// collinear within tolerance.
double shared_length(const Segment& s, const Segment& t) {
  const double dx = s.b.x - s.a.x;
  const double dy = s.b.y - s.a.y;
  const double len = std::hypot(dx, dy);
  if (len <= kEdgeTolerance) return 0.0;
  const double ux = dx / len;
  const double uy = dy / len;
  auto offset = [&](const ProjectedPoint& p) { return std::abs((p.x - s.a.x) * uy - (p.y - s.a.y) * ux); };
  if (offset(t.a) > kEdgeTolerance || offset(t.b) > kEdgeTolerance) return 0.0;
  auto along = [&](const ProjectedPoint& p) { return (p.x - s.a.x) * ux + (p.y - s.a.y) * uy; };
  const double t0 = along(t.a);
  const double t1 = along(t.b);
  const double lo = std::max(0.0, std::min(t0, t1));
  const double hi = std::min(len, std::max(t0, t1));
  return std::max(0.0, hi - lo);
}

bool share_edge(const std::vector<Segment>& a, const std::vector<Segment>& b) {
  for (const auto& s : a) {
    for (const auto& t : b) {
      if (shared_length(s, t) > kEdgeTolerance) return true;
    }
  }
  return false;
}

}  // namespace

BoundaryPolygonSet make_boundary_set(std::vector<std::pair<SchoolId, MultiPolygon>> shapes) {
  BoundaryPolygonSet out;
  for (auto& [id, shape] : shapes) {
    repair(shape, id);
    const double a = area_m2(shape);
    if (!(a > 0.0)) throw GeometryError(id, "zone has no area");
    out.push_back({id, std::move(shape), a});
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.school_id < y.school_id; });
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i].school_id == out[i - 1].school_id) {
      throw InputError("school '" + out[i].school_id + "' has more than one boundary feature");
    }
  }
  return out;
}

BaselineAssignment assign_blocks_to_schools(const std::map<BlockId, LatLon>& block_centroids,
                                            const BoundaryPolygonSet& boundaries) {
  BaselineAssignment out;
  for (const auto& [block, c] : block_centroids) {
    const BoundaryPolygon* best = nullptr;
    int hits = 0;
    for (const auto& zone : boundaries) {
      if (!contains(zone.shape, c)) continue;
      ++hits;
      if (best == nullptr || zone.area_m2 < best->area_m2 ||
          (zone.area_m2 == best->area_m2 && zone.school_id < best->school_id)) {
        best = &zone;
      }
    }
    if (best == nullptr) {
      out.unassigned.push_back(block);
      continue;
    }
    if (hits > 1) out.overlapped.push_back(block);
    out.plan.emplace(block, best->school_id);
  }
  return out;
}

Adjacency build_adjacency(const std::map<BlockId, MultiPolygon>& block_polygons) {
  struct Entry {
    const BlockId* id;
    std::vector<Segment> segs;
    Box box;
  };
  std::vector<Entry> entries;
  for (const auto& [id, shape] : block_polygons) {
    auto segs = segments_of(shape);
    auto box = box_of(segs);
    entries.push_back({&id, std::move(segs), box});
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return a.box.min_x < b.box.min_x || (a.box.min_x == b.box.min_x && *a.id < *b.id);
  });

  Adjacency out;
  for (const auto& [id, shape] : block_polygons) out.neighbors[id];
  for (std::size_t i = 0; i < entries.size(); ++i) {
    for (std::size_t j = i + 1; j < entries.size(); ++j) {
      if (entries[j].box.min_x > entries[i].box.max_x + kEdgeTolerance) break;
      const auto& bi = entries[i].box;
      const auto& bj = entries[j].box;
      if (bj.min_y > bi.max_y + kEdgeTolerance || bi.min_y > bj.max_y + kEdgeTolerance) continue;
      if (share_edge(entries[i].segs, entries[j].segs)) {
        out.neighbors[*entries[i].id].push_back(*entries[j].id);
        out.neighbors[*entries[j].id].push_back(*entries[i].id);
      }
    }
  }
  for (auto& [id, nbrs] : out.neighbors) {
    std::sort(nbrs.begin(), nbrs.end());
    if (nbrs.empty()) out.isolated.push_back(id);
  }
  return out;
}

std::vector<Feature> features_from_json(const nlohmann::json& fc, const std::string& id_property,
                                        const std::string& source) {
  if (!fc.is_object() || fc.value("type", "") != "FeatureCollection" || !fc.contains("features") ||
      !fc.at("features").is_array()) {
    throw InputError(source + ": expected a GeoJSON FeatureCollection");
  }
  std::vector<Feature> out;
  for (const auto& f : fc.at("features")) {
    if (!f.is_object() || !f.contains("properties") || !f.at("properties").is_object() ||
        !f.at("properties").contains(id_property)) {
      throw InputError(source + ": feature without property '" + id_property + "'");
    }
    const auto& idv = f.at("properties").at(id_property);
    std::string id = idv.is_string() ? idv.get<std::string>() : idv.dump();
    if (!f.contains("geometry")) throw GeometryError(id, "feature has no geometry");
    out.push_back({id, multipolygon_from_geojson(f.at("geometry"), id), f.at("geometry")});
  }
  return out;
}

std::vector<Feature> read_feature_collection(const std::filesystem::path& path, const std::string& id_property) {
  return features_from_json(read_json_file(path), id_property, path.string());
}

}  // namespace rezoner::geo
