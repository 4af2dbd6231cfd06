#include "rezoner/validate.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace rezoner {

namespace {

std::string describe(const ValidationReport& r) {
  std::string s = std::to_string(r.size()) + " violation(s)";
  if (!r.empty()) s += ", first: " + r.front().code + " (" + r.front().subject + "): " + r.front().message;
  return s;
}

bool has_negative(const GroupCounts& c) {
  for (auto v : c.by_group) {
    if (v < 0) return true;
  }
  return false;
}

void check_plan(const District& d, const AssignmentPlan& plan, const std::set<std::string>& block_ids,
                const std::set<std::string>& school_ids, ValidationReport& out) {
  for (const auto& [block, school] : plan) {
    if (!block_ids.contains(block)) {
      out.push_back({"unknown_block", block, "plan maps a block that is not in the district"});
    }
    if (!school_ids.contains(school)) {
      out.push_back({"unknown_school", block, "plan maps block to unknown school '" + school + "'"});
    }
  }
  for (const auto& id : block_ids) {
    if (!plan.contains(id)) out.push_back({"unassigned_block", id, "block missing from plan"});
  }
  for (const auto& s : d.schools) {
    auto it = plan.find(s.containing_block_id);
    if (it != plan.end() && it->second != s.id) {
      out.push_back({"anchor_moved", s.id,
                     "containing block '" + s.containing_block_id + "' is assigned to '" + it->second + "'"});
    }
  }
}

}  // namespace

InvalidDistrictError::InvalidDistrictError(ValidationReport report)
    : DomainError("invalid district: " + describe(report)), report_(std::move(report)) {}

InvalidPlanError::InvalidPlanError(ValidationReport report)
    : DomainError("invalid plan: " + describe(report)), report_(std::move(report)) {}

ValidationReport validate_district(const District& d) {
  ValidationReport out;

  std::set<std::string> block_ids;
  for (const auto& b : d.blocks) {
    if (!block_ids.insert(b.id).second) out.push_back({"duplicate_block", b.id, "block id appears twice"});
    if (has_negative(b.census_children)) out.push_back({"negative_count", b.id, "negative census count"});
  }
  std::set<std::string> school_ids;
  std::map<std::string, std::string> anchor_owner;
  for (const auto& s : d.schools) {
    if (!school_ids.insert(s.id).second) out.push_back({"duplicate_school", s.id, "school id appears twice"});
    if (has_negative(s.enrollment_by_group)) out.push_back({"negative_count", s.id, "negative enrollment"});
    if (s.enrollment_by_group.total() <= 0) out.push_back({"empty_school", s.id, "school enrolls no students"});
    if (!block_ids.contains(s.containing_block_id)) {
      out.push_back({"unknown_containing_block", s.id,
                     "containing block '" + s.containing_block_id + "' is not in the district"});
    }
    auto [it, inserted] = anchor_owner.emplace(s.containing_block_id, s.id);
    if (!inserted) {
      out.push_back({"shared_anchor", s.id, "shares containing block with school '" + it->second + "'"});
    }
  }
  if (d.schools.empty()) out.push_back({"no_schools", d.id, "district has no schools"});

  std::map<std::string, const Block*> by_id;
  for (const auto& b : d.blocks) by_id.emplace(b.id, &b);
  for (const auto& b : d.blocks) {
    for (const auto& n : b.adjacent_block_ids) {
      if (n == b.id) {
        out.push_back({"self_adjacent", b.id, "block lists itself as adjacent"});
        continue;
      }
      auto it = by_id.find(n);
      if (it == by_id.end()) {
        out.push_back({"unknown_adjacent_block", b.id, "adjacent block '" + n + "' is not in the district"});
        continue;
      }
      const auto& back = it->second->adjacent_block_ids;
      if (std::find(back.begin(), back.end(), b.id) == back.end()) {
        out.push_back({"asymmetric_adjacency", b.id, "'" + n + "' does not list this block back"});
      }
    }
  }

  check_plan(d, d.baseline_plan, block_ids, school_ids, out);

  std::map<std::string, GroupCounts> zoned;
  for (const auto& [block, counts] : d.students_per_block) {
    if (!block_ids.contains(block)) {
      out.push_back({"unknown_block", block, "student counts for a block that is not in the district"});
      continue;
    }
    if (has_negative(counts)) out.push_back({"negative_count", block, "negative student count"});
    auto it = d.baseline_plan.find(block);
    if (it != d.baseline_plan.end()) zoned[it->second] += counts;
  }
  for (const auto& s : d.schools) {
    const GroupCounts& got = zoned[s.id];
    for (Group g : kAllGroups) {
      if (got[g] != s.enrollment_by_group[g]) {
        out.push_back({"enrollment_mismatch", s.id,
                       std::string(group_name(g)) + " students zoned " + std::to_string(got[g]) +
                           " but enrollment is " + std::to_string(s.enrollment_by_group[g])});
      }
    }
  }
  return out;
}

ValidationReport validate_plan(const District& d, const AssignmentPlan& plan) {
  std::set<std::string> block_ids;
  std::set<std::string> school_ids;
  for (const auto& b : d.blocks) block_ids.insert(b.id);
  for (const auto& s : d.schools) school_ids.insert(s.id);
  ValidationReport out;
  check_plan(d, plan, block_ids, school_ids, out);
  return out;
}

nlohmann::json to_json(const ValidationReport& report) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& v : report) arr.push_back({{"code", v.code}, {"subject", v.subject}, {"message", v.message}});
  return arr;
}

}  // namespace rezoner
