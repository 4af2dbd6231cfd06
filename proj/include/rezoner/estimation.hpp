#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <vector>

#include "rezoner/model.hpp"

namespace rezoner {

/// Inputs to the per-block student estimate: baseline zones, census
/// children per block and group, and school enrollment per group.
struct AllocationInput {
  std::map<SchoolId, std::vector<BlockId>> zones;
  std::map<BlockId, GroupCounts> census;
  std::map<SchoolId, GroupCounts> enrollment;
};

/// One block of a zone as seen by a single (school, group) allocation.
struct ZoneBlock {
  BlockId id;
  std::int64_t group_children = 0;  // C_gb
  std::int64_t all_children = 0;    // C_b
};

/// Places exactly `enrolled` students of one group over the blocks of one
/// zone. Result is aligned with `blocks`.
///
/// Each block's share is C_gb / C_gB; a share above one half is replaced by
/// the block's share of all children, C_b / C_B (and every share uses C_b / C_B
/// when the zone has no children of the group). Blocks are visited by
/// descending C_gb, then block id, each receiving ceil(share * enrolled),
/// capped by the students still unplaced and, when C_gb > 0, by C_gb. Any
/// remainder is dealt one student at a time, in the same order, to blocks
/// with children, ignoring the caps.
///
/// Throws UnallocatableError (naming `school_id`/`group`) when `enrolled` > 0
/// and the zone has no children at all.
std::vector<std::int64_t> allocate_zone_group(std::span<const ZoneBlock> blocks, std::int64_t enrolled,
                                              const SchoolId& school_id, Group group);

/// N_gb for every zoned block. Blocks with nothing allocated map to zero
/// counts. Sum over each zone equals the school's enrollment exactly.
std::map<BlockId, GroupCounts> allocate_students(const AllocationInput& input);

/// {block_id, group, under18_count}
std::map<BlockId, GroupCounts> read_census_csv(const std::filesystem::path& path);
/// {school_id, group, enrollment}
std::map<SchoolId, GroupCounts> read_enrollment_csv(const std::filesystem::path& path);

}  // namespace rezoner
