#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rezoner/instance.hpp"
#include "rezoner/travel.hpp"

namespace rezoner {

struct GroupOutcome {
  Group group = Group::White;
  std::int64_t students = 0;
  std::int64_t switchers = 0;
  double switcher_fraction = 0.0;
  /// Student-weighted mean over switchers; 0 when nobody switches.
  double mean_travel_delta_minutes = 0.0;
  /// Group-vs-rest dissimilarity; absent when the split is undefined.
  std::optional<double> segregation_before;
  std::optional<double> segregation_after;
  std::optional<double> absolute_change;
  /// (after - before) / before; absent when before is 0 or undefined.
  std::optional<double> relative_change;
};

struct SchoolOutcome {
  SchoolId school_id;
  GroupCounts before;
  GroupCounts after;
  /// Group shares of the school's students; all zero for an empty school.
  std::array<double, kGroupCount> share_before{};
  std::array<double, kGroupCount> share_after{};
};

struct OutcomeReport {
  std::vector<GroupOutcome> groups;  // in Group order
  std::vector<SchoolOutcome> schools;  // in school id order
  std::int64_t students = 0;
  std::int64_t switchers = 0;
  double switcher_fraction = 0.0;
  double mean_travel_delta_minutes = 0.0;

  const GroupOutcome& group(Group g) const { return groups[static_cast<std::size_t>(g)]; }
};

/// Compares a candidate zoning to the baseline. A student switches iff the
/// two plans send their block to different schools; their travel delta is
/// travel(block, new) - travel(block, old). Throws TravelLookupError for the
/// first pair the provider cannot answer.
OutcomeReport outcome_report(const Instance& instance, const Zoning& baseline, const Zoning& candidate,
                             const TravelTimeProvider& travel);
OutcomeReport outcome_report(const District& district, const AssignmentPlan& baseline,
                             const AssignmentPlan& candidate, const TravelTimeProvider& travel);

nlohmann::json to_json(const OutcomeReport& report);
/// One row per group, then one per school.
std::string to_csv(const OutcomeReport& report);

}  // namespace rezoner
