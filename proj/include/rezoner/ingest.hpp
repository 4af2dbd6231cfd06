#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rezoner/geo.hpp"
#include "rezoner/model.hpp"

namespace rezoner {

struct IngestInputs {
  std::string district_id = "district";
  std::vector<geo::Feature> blocks;      // census block polygons
  std::vector<geo::Feature> boundaries;  // one attendance zone per school
  std::map<SchoolId, LatLon> school_locations;
  std::map<BlockId, GroupCounts> census;
  std::map<SchoolId, GroupCounts> enrollment;
};

struct IngestReport {
  std::size_t blocks_read = 0;
  std::vector<BlockId> unassigned;
  std::vector<BlockId> overlapped;
  std::vector<BlockId> isolated;
  /// Blocks holding a school that the boundaries zoned elsewhere; they are
  /// moved to the school they hold.
  std::vector<BlockId> anchor_overrides;
  /// Census rows naming blocks absent from the block file.
  std::vector<BlockId> unknown_census_blocks;
};

struct IngestResult {
  District district;
  IngestReport report;
};

/// Boundaries -> baseline plan, polygons -> adjacency, census + enrollment ->
/// students per block. Blocks outside every zone are dropped.
///
/// Throws InputError when a school appears in one input but not another, and
/// UnallocatableError when a zone enrolls students but has no children.
IngestResult ingest(const IngestInputs& inputs);

/// {school_id, lat, lon}
std::map<SchoolId, LatLon> read_school_locations_csv(const std::filesystem::path& path);

nlohmann::json to_json(const IngestReport& report);

}  // namespace rezoner
