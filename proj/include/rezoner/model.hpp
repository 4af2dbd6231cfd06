#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace rezoner {

using BlockId = std::string;
using SchoolId = std::string;

/// Racial/ethnic groups tracked for students and census children.
enum class Group : std::uint8_t { Asian, Black, HispanicLatinx, NativeAmerican, White };

inline constexpr std::size_t kGroupCount = 5;
inline constexpr std::array<Group, kGroupCount> kAllGroups = {
    Group::Asian, Group::Black, Group::HispanicLatinx, Group::NativeAmerican, Group::White};

std::string_view group_name(Group g);
/// Accepts the canonical names plus common spellings ("Hispanic/Latinx",
/// "native_american", ...). Returns nullopt for anything else.
std::optional<Group> parse_group(std::string_view name);

/// Per-group nonnegative counts, indexed by Group.
struct GroupCounts {
  std::array<std::int64_t, kGroupCount> by_group{};

  std::int64_t& operator[](Group g) { return by_group[static_cast<std::size_t>(g)]; }
  std::int64_t operator[](Group g) const { return by_group[static_cast<std::size_t>(g)]; }

  std::int64_t total() const;
  std::int64_t white() const { return (*this)[Group::White]; }
  std::int64_t non_white() const { return total() - white(); }
  /// Count of `focal` and of everyone else.
  std::int64_t focal(Group focal_group) const { return (*this)[focal_group]; }
  std::int64_t complement(Group focal_group) const { return total() - focal(focal_group); }

  GroupCounts& operator+=(const GroupCounts& o);
  GroupCounts& operator-=(const GroupCounts& o);
  friend bool operator==(const GroupCounts&, const GroupCounts&) = default;
};

struct LatLon {
  double lat = 0.0;
  double lon = 0.0;
  friend bool operator==(const LatLon&, const LatLon&) = default;
};

struct Block {
  BlockId id;
  LatLon centroid;
  std::vector<BlockId> adjacent_block_ids;  // sorted, unique
  GroupCounts census_children;
  /// Optional GeoJSON geometry object carried through for map output.
  nlohmann::json geometry;
};

struct School {
  SchoolId id;
  LatLon location;
  BlockId containing_block_id;
  GroupCounts enrollment_by_group;
};

/// Total mapping block id -> school id. Ordered by block id.
using AssignmentPlan = std::map<BlockId, SchoolId>;

/// A complete problem instance in interchange form. Nothing here is checked
/// on construction; see validate_district().
struct District {
  std::string id;
  std::vector<Block> blocks;
  std::vector<School> schools;
  AssignmentPlan baseline_plan;
  /// N_gb: students of each group living in each block (baseline zoning).
  std::map<BlockId, GroupCounts> students_per_block;

  const Block* find_block(std::string_view id) const;
  const School* find_school(std::string_view id) const;
  GroupCounts students_in(std::string_view block_id) const;
};

enum class ObjectiveMode : std::uint8_t { Dissimilarity, InteractionExposure, Leximin };

std::string_view objective_name(ObjectiveMode m);
std::optional<ObjectiveMode> parse_objective(std::string_view name);

struct ConstraintConfig {
  double max_travel_increase_fraction = 0.5;
  double max_size_increase_fraction = 0.15;
  bool enforce_contiguity = true;
  ObjectiveMode objective_mode = ObjectiveMode::Dissimilarity;
  double time_budget_seconds = 60.0;
  std::uint64_t seed = 0;
  /// Number of annealing runs; each later run restarts from the incumbent.
  int restarts = 4;

  friend bool operator==(const ConstraintConfig&, const ConstraintConfig&) = default;
};

/// Returns a list of problems; empty means the config is usable.
std::vector<std::string> config_errors(const ConstraintConfig& config);

void to_json(nlohmann::json& j, const ConstraintConfig& c);
/// Missing keys keep their defaults. Throws InputError on wrong types or
/// unknown objective names.
void from_json(const nlohmann::json& j, ConstraintConfig& c);

nlohmann::json group_counts_to_json(const GroupCounts& counts);
GroupCounts group_counts_from_json(const nlohmann::json& j);

}  // namespace rezoner
