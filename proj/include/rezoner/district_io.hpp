#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "rezoner/model.hpp"

namespace rezoner {

/// District interchange JSON:
///   {"id", "blocks": [{"id","lat","lon","adjacent","census_children","geometry"?}],
///    "schools": [{"id","lat","lon","containing_block_id","enrollment"}],
///    "baseline_plan": [{"block_id","school_id"}],
///    "students_per_block": [{"block_id","group","count"}]}
/// Arrays are emitted in id order so equal districts serialize identically.
nlohmann::json district_to_json(const District& district);
District district_from_json(const nlohmann::json& j);

nlohmann::json plan_to_json(const AssignmentPlan& plan);
/// Accepts a bare plan array or an object holding "plan", "best_plan" or
/// "baseline_plan".
AssignmentPlan plan_from_json(const nlohmann::json& j);

/// Throws InputError when the file is missing or not JSON.
nlohmann::json read_json_file(const std::filesystem::path& path);
District load_district(const std::filesystem::path& path);

}  // namespace rezoner
