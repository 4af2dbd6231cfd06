#include "rezoner/ingest.hpp"

#include <algorithm>
#include <set>

#include "rezoner/csv.hpp"
#include "rezoner/errors.hpp"
#include "rezoner/estimation.hpp"

namespace rezoner {

namespace {

void require_same_schools(const std::set<SchoolId>& zoned, const std::map<SchoolId, LatLon>& located,
                          const std::map<SchoolId, GroupCounts>& enrolled) {
  for (const auto& [s, _] : located) {
    if (!zoned.contains(s)) throw InputError("school '" + s + "' has a location but no attendance boundary");
  }
  for (const auto& [s, _] : enrolled) {
    if (!zoned.contains(s)) throw InputError("school '" + s + "' has enrollment but no attendance boundary");
  }
  for (const auto& s : zoned) {
    if (!located.contains(s)) throw InputError("school '" + s + "' has a boundary but no location");
  }
}

}  // namespace

IngestResult ingest(const IngestInputs& in) {
  IngestResult out;
  auto& report = out.report;
  report.blocks_read = in.blocks.size();

  std::vector<std::pair<SchoolId, geo::MultiPolygon>> zones;
  std::set<SchoolId> zoned;
  for (const auto& f : in.boundaries) {
    if (!zoned.insert(f.id).second) throw InputError("duplicate boundary for school '" + f.id + "'");
    zones.emplace_back(f.id, f.shape);
  }
  require_same_schools(zoned, in.school_locations, in.enrollment);
  const auto boundary_set = geo::make_boundary_set(std::move(zones));

  std::map<BlockId, const geo::Feature*> features;
  std::map<BlockId, LatLon> centroids;
  for (const auto& f : in.blocks) {
    if (!features.emplace(f.id, &f).second) throw InputError("duplicate block '" + f.id + "'");
    auto shape = f.shape;
    geo::repair(shape, f.id);
    centroids[f.id] = geo::centroid(shape);
  }
  auto assigned = geo::assign_blocks_to_schools(centroids, boundary_set);
  report.unassigned = assigned.unassigned;
  report.overlapped = assigned.overlapped;

  // Each school sits in the first kept block (by id) containing it.
  District& d = out.district;
  d.id = in.district_id;
  for (const auto& [sid, location] : in.school_locations) {
    School s;
    s.id = sid;
    s.location = location;
    for (const auto& [bid, _] : assigned.plan) {
      if (geo::contains(features.at(bid)->shape, location)) {
        s.containing_block_id = bid;
        break;
      }
    }
    if (s.containing_block_id.empty()) throw InputError("school '" + sid + "' lies in no zoned block");
    auto& zone = assigned.plan[s.containing_block_id];
    if (zone != sid) {
      report.anchor_overrides.push_back(s.containing_block_id);
      zone = sid;
    }
    d.schools.push_back(std::move(s));
  }
  std::sort(report.anchor_overrides.begin(), report.anchor_overrides.end());

  std::map<BlockId, geo::MultiPolygon> kept;
  for (const auto& [bid, _] : assigned.plan) kept[bid] = features.at(bid)->shape;
  const auto adjacency = geo::build_adjacency(kept);
  report.isolated = adjacency.isolated;

  AllocationInput alloc;
  for (const auto& [bid, sid] : assigned.plan) {
    Block b;
    b.id = bid;
    b.centroid = centroids.at(bid);
    b.adjacent_block_ids = adjacency.neighbors.at(bid);
    if (const auto it = in.census.find(bid); it != in.census.end()) b.census_children = it->second;
    b.geometry = features.at(bid)->geometry;
    alloc.zones[sid].push_back(bid);
    alloc.census[bid] = b.census_children;
    d.blocks.push_back(std::move(b));
  }
  for (const auto& [bid, _] : in.census) {
    if (!features.contains(bid)) report.unknown_census_blocks.push_back(bid);
  }
  for (auto& s : d.schools) {
    if (const auto it = in.enrollment.find(s.id); it != in.enrollment.end()) s.enrollment_by_group = it->second;
    alloc.enrollment[s.id] = s.enrollment_by_group;
  }
  d.baseline_plan = assigned.plan;
  d.students_per_block = allocate_students(alloc);
  return out;
}

std::map<SchoolId, LatLon> read_school_locations_csv(const std::filesystem::path& path) {
  const auto t = CsvTable::read(path);
  const auto id = t.column("school_id");
  const auto lat = t.column("lat");
  const auto lon = t.column("lon");
  std::map<SchoolId, LatLon> out;
  for (std::size_t r = 0; r < t.rows(); ++r) {
    if (!out.emplace(t.cell(r, id), LatLon{t.number(r, lat), t.number(r, lon)}).second) {
      throw InputError(path.string() + ": duplicate school '" + t.cell(r, id) + "'");
    }
  }
  return out;
}

nlohmann::json to_json(const IngestReport& r) {
  return {{"blocks_read", r.blocks_read},
          {"blocks_kept", r.blocks_read - r.unassigned.size()},
          {"unassigned_count", r.unassigned.size()},
          {"unassigned", r.unassigned},
          {"overlap_count", r.overlapped.size()},
          {"overlapped", r.overlapped},
          {"isolated", r.isolated},
          {"anchor_overrides", r.anchor_overrides},
          {"unknown_census_blocks", r.unknown_census_blocks}};
}

}  // namespace rezoner
