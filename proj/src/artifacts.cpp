#include "rezoner/artifacts.hpp"

#include "rezoner/district_io.hpp"
#include "rezoner/errors.hpp"
#include "rezoner/metrics.hpp"

namespace rezoner {

using nlohmann::json;

std::string pretty_json(const json& j) { return j.dump(2) + "\n"; }

std::map<std::string, std::string> solve_artifacts(const Instance& inst, const SolveResult& result,
                                                   const OutcomeReport& report) {
  return {{"result.json", pretty_json(to_json(result))},
          {"plan.json", pretty_json({{"district_id", inst.district_id()}, {"plan", plan_to_json(result.best_plan)}})},
          {"report.json", pretty_json(to_json(report))},
          {"report.csv", to_csv(report)},
          {"trace.csv", trace_csv(result.trace)}};
}

json plan_geojson(const District& d, const AssignmentPlan& plan) {
  json features = json::array();
  for (const auto& b : d.blocks) {
    const auto it = plan.find(b.id);
    const auto base = d.baseline_plan.find(b.id);
    const std::string school = it == plan.end() ? std::string() : it->second;
    const std::string baseline = base == d.baseline_plan.end() ? std::string() : base->second;
    json geometry = b.geometry.is_null()
                        ? json{{"type", "Point"}, {"coordinates", {b.centroid.lon, b.centroid.lat}}}
                        : b.geometry;
    features.push_back({{"type", "Feature"},
                        {"geometry", std::move(geometry)},
                        {"properties",
                         {{"kind", "block"},
                          {"block_id", b.id},
                          {"school_id", school},
                          {"baseline_school_id", baseline},
                          {"switched", school != baseline},
                          {"students", group_counts_to_json(d.students_in(b.id))}}}});
  }
  for (const auto& s : d.schools) {
    features.push_back({{"type", "Feature"},
                        {"geometry", {{"type", "Point"}, {"coordinates", {s.location.lon, s.location.lat}}}},
                        {"properties", {{"kind", "school"}, {"school_id", s.id}}}});
  }
  return {{"type", "FeatureCollection"}, {"features", std::move(features)}};
}

json baseline_summary(const Instance& inst) {
  const auto counts = inst.school_counts(inst.baseline());
  json by_group = json::object();
  for (Group g : kAllGroups) {
    try {
      by_group[std::string(group_name(g))] = dissimilarity(counts, g).value;
    } catch (const UndefinedIndexError&) {
      by_group[std::string(group_name(g))] = nullptr;
    }
  }
  json out = {{"students", inst.district_totals().total()}, {"dissimilarity", by_group}};
  try {
    out["interaction_exposure"] = interaction_exposure(counts, Group::White).value;
    const auto top = max_term(inst, inst.baseline());
    out["max_term"] = {{"school_id", top.school_id}, {"value", top.value}};
  } catch (const UndefinedIndexError&) {
    out["interaction_exposure"] = nullptr;
    out["max_term"] = nullptr;
  }
  json schools = json::array();
  for (std::size_t s = 0; s < inst.school_count(); ++s) {
    const auto n = counts[s].total();
    json share = json::object();
    for (Group g : kAllGroups) {
      share[std::string(group_name(g))] = n == 0 ? 0.0 : static_cast<double>(counts[s][g]) / static_cast<double>(n);
    }
    schools.push_back({{"school_id", inst.school_id(s)},
                       {"students", n},
                       {"counts", group_counts_to_json(counts[s])},
                       {"share", share}});
  }
  out["schools"] = std::move(schools);
  return out;
}

}  // namespace rezoner
