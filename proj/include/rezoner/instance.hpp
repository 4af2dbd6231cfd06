#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "rezoner/model.hpp"

namespace rezoner {

/// School index per block, aligned with Instance::block_ids.
using Zoning = std::vector<std::int32_t>;

/// Index-based, immutable view of a validated District. Blocks and schools
/// are ordered by id, so index order is lexicographic id order.
class Instance {
 public:
  /// Throws InvalidDistrictError when validate_district() reports anything.
  static Instance compile(const District& district);

  std::size_t block_count() const { return block_ids_.size(); }
  std::size_t school_count() const { return school_ids_.size(); }

  const std::string& district_id() const { return district_id_; }
  const std::string& block_id(std::size_t b) const { return block_ids_[b]; }
  const std::string& school_id(std::size_t s) const { return school_ids_[s]; }
  const std::vector<std::string>& block_ids() const { return block_ids_; }
  const std::vector<std::string>& school_ids() const { return school_ids_; }

  /// -1 when unknown.
  std::int32_t block_index(std::string_view id) const;
  std::int32_t school_index(std::string_view id) const;

  std::span<const std::int32_t> neighbors(std::size_t b) const {
    return {adjacency_.data() + adjacency_offsets_[b], adjacency_.data() + adjacency_offsets_[b + 1]};
  }

  const GroupCounts& students(std::size_t b) const { return students_[b]; }
  std::int64_t student_total(std::size_t b) const { return student_totals_[b]; }
  const GroupCounts& district_totals() const { return district_totals_; }

  std::int32_t anchor_block(std::size_t s) const { return anchor_block_[s]; }
  /// School anchored at block b, or -1.
  std::int32_t anchored_school(std::size_t b) const { return anchored_school_[b]; }

  const Zoning& baseline() const { return baseline_; }
  const LatLon& block_centroid(std::size_t b) const { return block_centroids_[b]; }
  const LatLon& school_location(std::size_t s) const { return school_locations_[s]; }

  /// Throws InvalidPlanError on non-total, unknown-id or anchor-breaking plans.
  Zoning zoning_from_plan(const AssignmentPlan& plan) const;
  AssignmentPlan plan_from_zoning(const Zoning& zoning) const;

  /// Per-school totals of students under a zoning.
  std::vector<GroupCounts> school_counts(const Zoning& zoning) const;

 private:
  std::string district_id_;
  std::vector<std::string> block_ids_;
  std::vector<std::string> school_ids_;
  std::unordered_map<std::string, std::int32_t> block_lookup_;
  std::unordered_map<std::string, std::int32_t> school_lookup_;
  std::vector<std::int32_t> adjacency_offsets_;
  std::vector<std::int32_t> adjacency_;
  std::vector<GroupCounts> students_;
  std::vector<std::int64_t> student_totals_;
  GroupCounts district_totals_;
  std::vector<std::int32_t> anchor_block_;
  std::vector<std::int32_t> anchored_school_;
  Zoning baseline_;
  std::vector<LatLon> block_centroids_;
  std::vector<LatLon> school_locations_;
};

}  // namespace rezoner
