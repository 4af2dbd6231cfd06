#include "rezoner/district_io.hpp"

#include <algorithm>
#include <fstream>

#include "rezoner/errors.hpp"

namespace rezoner {

using nlohmann::json;

namespace {

const json& require(const json& obj, const char* key, const char* where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw InputError(std::string(where) + ": missing required key '" + key + "'");
  }
  return obj.at(key);
}

std::string id_string(const json& v, const char* where) {
  if (!v.is_string()) throw InputError(std::string(where) + ": ids must be strings");
  return v.get<std::string>();
}

double number(const json& v, const char* where) {
  if (!v.is_number()) throw InputError(std::string(where) + ": expected a number");
  return v.get<double>();
}

}  // namespace

json district_to_json(const District& d) {
  std::vector<const Block*> blocks;
  for (const auto& b : d.blocks) blocks.push_back(&b);
  std::sort(blocks.begin(), blocks.end(), [](auto* a, auto* b) { return a->id < b->id; });
  std::vector<const School*> schools;
  for (const auto& s : d.schools) schools.push_back(&s);
  std::sort(schools.begin(), schools.end(), [](auto* a, auto* b) { return a->id < b->id; });

  json jb = json::array();
  for (const Block* b : blocks) {
    auto adjacent = b->adjacent_block_ids;
    std::sort(adjacent.begin(), adjacent.end());
    json e = {{"id", b->id},
              {"lat", b->centroid.lat},
              {"lon", b->centroid.lon},
              {"adjacent", adjacent},
              {"census_children", group_counts_to_json(b->census_children)}};
    if (!b->geometry.is_null()) e["geometry"] = b->geometry;
    jb.push_back(std::move(e));
  }
  json js = json::array();
  for (const School* s : schools) {
    js.push_back({{"id", s->id},
                  {"lat", s->location.lat},
                  {"lon", s->location.lon},
                  {"containing_block_id", s->containing_block_id},
                  {"enrollment", group_counts_to_json(s->enrollment_by_group)}});
  }
  json students = json::array();
  for (const auto& [block, counts] : d.students_per_block) {
    for (Group g : kAllGroups) {
      if (counts[g] != 0) students.push_back({{"block_id", block}, {"group", group_name(g)}, {"count", counts[g]}});
    }
  }
  return {{"id", d.id},
          {"blocks", jb},
          {"schools", js},
          {"baseline_plan", plan_to_json(d.baseline_plan)},
          {"students_per_block", students}};
}

District district_from_json(const json& j) {
  if (!j.is_object()) throw InputError("district JSON must be an object");
  District d;
  if (j.contains("id")) d.id = id_string(j.at("id"), "district");

  const auto& jb = require(j, "blocks", "district");
  if (!jb.is_array()) throw InputError("district: 'blocks' must be an array");
  for (const auto& e : jb) {
    Block b;
    b.id = id_string(require(e, "id", "block"), "block");
    b.centroid = {number(require(e, "lat", "block"), "block lat"), number(require(e, "lon", "block"), "block lon")};
    if (e.contains("adjacent")) {
      if (!e.at("adjacent").is_array()) throw InputError("block '" + b.id + "': 'adjacent' must be an array");
      for (const auto& n : e.at("adjacent")) b.adjacent_block_ids.push_back(id_string(n, "adjacent"));
      std::sort(b.adjacent_block_ids.begin(), b.adjacent_block_ids.end());
      b.adjacent_block_ids.erase(std::unique(b.adjacent_block_ids.begin(), b.adjacent_block_ids.end()),
                                 b.adjacent_block_ids.end());
    }
    if (e.contains("census_children")) b.census_children = group_counts_from_json(e.at("census_children"));
    if (e.contains("geometry")) b.geometry = e.at("geometry");
    d.blocks.push_back(std::move(b));
  }

  const auto& js = require(j, "schools", "district");
  if (!js.is_array()) throw InputError("district: 'schools' must be an array");
  for (const auto& e : js) {
    School s;
    s.id = id_string(require(e, "id", "school"), "school");
    s.location = {number(require(e, "lat", "school"), "school lat"), number(require(e, "lon", "school"), "school lon")};
    s.containing_block_id = id_string(require(e, "containing_block_id", "school"), "school");
    if (e.contains("enrollment")) s.enrollment_by_group = group_counts_from_json(e.at("enrollment"));
    d.schools.push_back(std::move(s));
  }

  d.baseline_plan = plan_from_json(require(j, "baseline_plan", "district"));

  const auto& jn = require(j, "students_per_block", "district");
  if (!jn.is_array()) throw InputError("district: 'students_per_block' must be an array");
  for (const auto& e : jn) {
    const auto block = id_string(require(e, "block_id", "students_per_block"), "students_per_block");
    const auto group_str = require(e, "group", "students_per_block");
    if (!group_str.is_string()) throw InputError("students_per_block: group must be a string");
    auto g = parse_group(group_str.get<std::string>());
    if (!g) throw InputError("students_per_block: unknown group '" + group_str.get<std::string>() + "'");
    const auto& count = require(e, "count", "students_per_block");
    if (!count.is_number_integer()) throw InputError("students_per_block: count must be an integer");
    d.students_per_block[block][*g] += count.get<std::int64_t>();
  }
  return d;
}

json plan_to_json(const AssignmentPlan& plan) {
  json arr = json::array();
  for (const auto& [block, school] : plan) arr.push_back({{"block_id", block}, {"school_id", school}});
  return arr;
}

AssignmentPlan plan_from_json(const json& j) {
  const json* arr = &j;
  if (j.is_object()) {
    for (const char* key : {"plan", "best_plan", "baseline_plan"}) {
      if (j.contains(key)) {
        arr = &j.at(key);
        break;
      }
    }
  }
  if (!arr->is_array()) throw InputError("plan must be an array of {block_id, school_id}");
  AssignmentPlan plan;
  for (const auto& e : *arr) {
    auto block = id_string(require(e, "block_id", "plan"), "plan");
    auto school = id_string(require(e, "school_id", "plan"), "plan");
    if (!plan.emplace(block, school).second) throw InputError("plan assigns block '" + block + "' twice");
  }
  return plan;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

District load_district(const std::filesystem::path& path) { return district_from_json(read_json_file(path)); }

}  // namespace rezoner
