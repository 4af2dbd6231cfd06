#include "rezoner/instance.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "rezoner/validate.hpp"

namespace rezoner {

Instance Instance::compile(const District& district) {
  auto report = validate_district(district);
  if (!report.empty()) throw InvalidDistrictError(std::move(report));

  Instance inst;
  inst.district_id_ = district.id;

  std::vector<const Block*> blocks;
  for (const auto& b : district.blocks) blocks.push_back(&b);
  std::sort(blocks.begin(), blocks.end(), [](const Block* a, const Block* b) { return a->id < b->id; });
  std::vector<const School*> schools;
  for (const auto& s : district.schools) schools.push_back(&s);
  std::sort(schools.begin(), schools.end(), [](const School* a, const School* b) { return a->id < b->id; });

  for (std::size_t i = 0; i < blocks.size(); ++i) {
    inst.block_ids_.push_back(blocks[i]->id);
    inst.block_lookup_.emplace(blocks[i]->id, static_cast<std::int32_t>(i));
    inst.block_centroids_.push_back(blocks[i]->centroid);
  }
  for (std::size_t i = 0; i < schools.size(); ++i) {
    inst.school_ids_.push_back(schools[i]->id);
    inst.school_lookup_.emplace(schools[i]->id, static_cast<std::int32_t>(i));
    inst.school_locations_.push_back(schools[i]->location);
  }

  inst.adjacency_offsets_.push_back(0);
  for (const Block* b : blocks) {
    std::vector<std::int32_t> nbrs;
    for (const auto& n : b->adjacent_block_ids) nbrs.push_back(inst.block_lookup_.at(n));
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
    inst.adjacency_.insert(inst.adjacency_.end(), nbrs.begin(), nbrs.end());
    inst.adjacency_offsets_.push_back(static_cast<std::int32_t>(inst.adjacency_.size()));
  }

  for (const Block* b : blocks) {
    GroupCounts c = district.students_in(b->id);
    inst.students_.push_back(c);
    inst.student_totals_.push_back(c.total());
    inst.district_totals_ += c;
  }
  if (inst.district_totals_.total() > std::numeric_limits<std::int32_t>::max()) {
    // Index numerators are products of two counts; keep them inside int64.
    throw DomainError("district has more than 2^31 students");
  }

  inst.anchored_school_.assign(blocks.size(), -1);
  for (std::size_t s = 0; s < schools.size(); ++s) {
    const auto b = inst.block_lookup_.at(schools[s]->containing_block_id);
    inst.anchor_block_.push_back(b);
    inst.anchored_school_[b] = static_cast<std::int32_t>(s);
  }

  inst.baseline_.resize(blocks.size());
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    inst.baseline_[b] = inst.school_lookup_.at(district.baseline_plan.at(blocks[b]->id));
  }
  return inst;
}

std::int32_t Instance::block_index(std::string_view id) const {
  auto it = block_lookup_.find(std::string(id));
  return it == block_lookup_.end() ? -1 : it->second;
}

std::int32_t Instance::school_index(std::string_view id) const {
  auto it = school_lookup_.find(std::string(id));
  return it == school_lookup_.end() ? -1 : it->second;
}

Zoning Instance::zoning_from_plan(const AssignmentPlan& plan) const {
  ValidationReport report;
  Zoning z(block_count(), -1);
  for (const auto& [block, school] : plan) {
    const auto b = block_index(block);
    const auto s = school_index(school);
    if (b < 0) report.push_back({"unknown_block", block, "plan maps a block that is not in the district"});
    if (s < 0) report.push_back({"unknown_school", block, "plan maps block to unknown school '" + school + "'"});
    if (b >= 0 && s >= 0) z[b] = s;
  }
  for (std::size_t b = 0; b < block_count(); ++b) {
    if (!plan.contains(block_ids_[b])) {
      report.push_back({"unassigned_block", block_ids_[b], "block missing from plan"});
    }
  }
  for (std::size_t s = 0; s < school_count(); ++s) {
    const auto a = anchor_block_[s];
    if (z[a] >= 0 && z[a] != static_cast<std::int32_t>(s)) {
      report.push_back({"anchor_moved", school_ids_[s],
                        "containing block '" + block_ids_[a] + "' is assigned to '" + school_ids_[z[a]] + "'"});
    }
  }
  if (!report.empty()) throw InvalidPlanError(std::move(report));
  return z;
}

AssignmentPlan Instance::plan_from_zoning(const Zoning& zoning) const {
  AssignmentPlan plan;
  for (std::size_t b = 0; b < block_count(); ++b) plan.emplace(block_ids_[b], school_ids_[zoning[b]]);
  return plan;
}

std::vector<GroupCounts> Instance::school_counts(const Zoning& zoning) const {
  std::vector<GroupCounts> out(school_count());
  for (std::size_t b = 0; b < block_count(); ++b) out[zoning[b]] += students_[b];
  return out;
}

}  // namespace rezoner
