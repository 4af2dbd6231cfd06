#include "rezoner/estimation.hpp"

#include <algorithm>
#include <numeric>

#include "rezoner/csv.hpp"
#include "rezoner/errors.hpp"

namespace rezoner {

namespace {

std::int64_t ceil_div(std::int64_t num, std::int64_t den) { return num / den + (num % den != 0 ? 1 : 0); }

template <typename Id>
std::map<Id, GroupCounts> read_group_csv(const std::filesystem::path& path, const char* id_col,
                                         const char* count_col) {
  const auto t = CsvTable::read(path);
  const auto ci = t.column(id_col);
  const auto cg = t.column("group");
  const auto cc = t.column(count_col);
  std::map<Id, GroupCounts> out;
  for (std::size_t r = 0; r < t.rows(); ++r) {
    auto g = parse_group(t.cell(r, cg));
    if (!g) throw InputError(t.source() + ": row " + std::to_string(r + 2) + ": unknown group '" + t.cell(r, cg) + "'");
    const auto v = t.integer(r, cc);
    if (v < 0) throw InputError(t.source() + ": row " + std::to_string(r + 2) + ": negative count");
    out[t.cell(r, ci)][*g] += v;
  }
  return out;
}

}  // namespace

std::vector<std::int64_t> allocate_zone_group(std::span<const ZoneBlock> blocks, std::int64_t enrolled,
                                              const SchoolId& school_id, Group group) {
  std::vector<std::int64_t> placed(blocks.size(), 0);
  if (enrolled <= 0) return placed;

  std::int64_t group_total = 0;
  std::int64_t all_total = 0;
  for (const auto& b : blocks) {
    if (b.group_children < 0 || b.all_children < 0) throw InputError("negative census count in block '" + b.id + "'");
    group_total += b.group_children;
    all_total += b.all_children;
  }
  if (group_total == 0 && all_total == 0) throw UnallocatableError(school_id, std::string(group_name(group)));

  std::vector<std::size_t> order(blocks.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (blocks[a].group_children != blocks[b].group_children) {
      return blocks[a].group_children > blocks[b].group_children;
    }
    return blocks[a].id < blocks[b].id;
  });

  std::int64_t remaining = enrolled;
  for (std::size_t i : order) {
    if (remaining == 0) break;
    const auto& b = blocks[i];
    std::int64_t num = b.all_children;
    std::int64_t den = all_total;
    if (group_total > 0 && 2 * b.group_children <= group_total) {
      num = b.group_children;
      den = group_total;
    }
    std::int64_t amount = ceil_div(num * enrolled, den);
    amount = std::min(amount, remaining);
    if (b.group_children > 0) amount = std::min(amount, b.group_children);
    placed[i] = amount;
    remaining -= amount;
  }

  while (remaining > 0) {
    for (std::size_t i : order) {
      if (remaining == 0) break;
      if (blocks[i].all_children == 0 && blocks[i].group_children == 0) continue;
      ++placed[i];
      --remaining;
    }
  }
  return placed;
}

std::map<BlockId, GroupCounts> allocate_students(const AllocationInput& input) {
  std::map<BlockId, GroupCounts> out;
  for (const auto& [school, blocks] : input.zones) {
    for (const auto& b : blocks) out[b];
  }
  for (const auto& [school, enrolled] : input.enrollment) {
    auto zit = input.zones.find(school);
    static const std::vector<BlockId> kEmpty;
    const auto& zone = zit == input.zones.end() ? kEmpty : zit->second;
    for (Group g : kAllGroups) {
      if (enrolled[g] < 0) throw InputError("negative enrollment for school '" + school + "'");
      if (enrolled[g] == 0) continue;
      std::vector<ZoneBlock> blocks;
      for (const auto& id : zone) {
        auto cit = input.census.find(id);
        const GroupCounts c = cit == input.census.end() ? GroupCounts{} : cit->second;
        blocks.push_back({id, c[g], c.total()});
      }
      const auto placed = allocate_zone_group(blocks, enrolled[g], school, g);
      for (std::size_t i = 0; i < blocks.size(); ++i) out[blocks[i].id][g] += placed[i];
    }
  }
  return out;
}

std::map<BlockId, GroupCounts> read_census_csv(const std::filesystem::path& path) {
  return read_group_csv<BlockId>(path, "block_id", "under18_count");
}

std::map<SchoolId, GroupCounts> read_enrollment_csv(const std::filesystem::path& path) {
  return read_group_csv<SchoolId>(path, "school_id", "enrollment");
}

}  // namespace rezoner
