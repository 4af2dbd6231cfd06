#include "rezoner/outcome.hpp"

#include <sstream>

#include "rezoner/csv.hpp"
#include "rezoner/errors.hpp"
#include "rezoner/metrics.hpp"

namespace rezoner {

namespace {

std::optional<double> try_dissimilarity(std::span<const GroupCounts> schools, Group g) {
  try {
    return dissimilarity(schools, g).value;
  } catch (const UndefinedIndexError&) {
    return std::nullopt;
  }
}

std::array<double, kGroupCount> shares(const GroupCounts& c) {
  std::array<double, kGroupCount> out{};
  const auto n = c.total();
  if (n == 0) return out;
  for (std::size_t i = 0; i < kGroupCount; ++i) out[i] = static_cast<double>(c.by_group[i]) / static_cast<double>(n);
  return out;
}

nlohmann::json opt(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

std::string cell(const std::optional<double>& v) {
  if (!v) return "";
  std::ostringstream ss;
  ss.precision(17);
  ss << *v;
  return ss.str();
}

std::string cell(double v) { return cell(std::optional<double>(v)); }

}  // namespace

OutcomeReport outcome_report(const Instance& inst, const Zoning& baseline, const Zoning& candidate,
                             const TravelTimeProvider& travel) {
  OutcomeReport r;
  std::array<double, kGroupCount> delta_seconds{};
  double total_delta_seconds = 0.0;
  r.groups.resize(kGroupCount);
  for (Group g : kAllGroups) r.groups[static_cast<std::size_t>(g)].group = g;

  for (std::size_t b = 0; b < inst.block_count(); ++b) {
    const auto& n = inst.students(b);
    for (Group g : kAllGroups) r.groups[static_cast<std::size_t>(g)].students += n[g];
    r.students += n.total();
    if (baseline[b] == candidate[b] || n.total() == 0) continue;
    const auto& block = inst.block_id(b);
    const auto& c = inst.block_centroid(b);
    const double before = travel.seconds(block, c, inst.school_id(baseline[b]), inst.school_location(baseline[b]));
    const double after = travel.seconds(block, c, inst.school_id(candidate[b]), inst.school_location(candidate[b]));
    const double delta = after - before;
    for (Group g : kAllGroups) {
      auto& go = r.groups[static_cast<std::size_t>(g)];
      go.switchers += n[g];
      delta_seconds[static_cast<std::size_t>(g)] += delta * static_cast<double>(n[g]);
    }
    r.switchers += n.total();
    total_delta_seconds += delta * static_cast<double>(n.total());
  }

  const auto before_counts = inst.school_counts(baseline);
  const auto after_counts = inst.school_counts(candidate);
  for (Group g : kAllGroups) {
    auto& go = r.groups[static_cast<std::size_t>(g)];
    if (go.students > 0) go.switcher_fraction = static_cast<double>(go.switchers) / static_cast<double>(go.students);
    if (go.switchers > 0) {
      go.mean_travel_delta_minutes = delta_seconds[static_cast<std::size_t>(g)] / static_cast<double>(go.switchers) / 60.0;
    }
    go.segregation_before = try_dissimilarity(before_counts, g);
    go.segregation_after = try_dissimilarity(after_counts, g);
    if (go.segregation_before && go.segregation_after) {
      go.absolute_change = *go.segregation_after - *go.segregation_before;
      if (*go.segregation_before > 0.0) go.relative_change = *go.absolute_change / *go.segregation_before;
    }
  }
  if (r.students > 0) r.switcher_fraction = static_cast<double>(r.switchers) / static_cast<double>(r.students);
  if (r.switchers > 0) r.mean_travel_delta_minutes = total_delta_seconds / static_cast<double>(r.switchers) / 60.0;

  for (std::size_t s = 0; s < inst.school_count(); ++s) {
    r.schools.push_back({inst.school_id(s), before_counts[s], after_counts[s], shares(before_counts[s]),
                         shares(after_counts[s])});
  }
  return r;
}

OutcomeReport outcome_report(const District& district, const AssignmentPlan& baseline,
                             const AssignmentPlan& candidate, const TravelTimeProvider& travel) {
  const auto inst = Instance::compile(district);
  return outcome_report(inst, inst.zoning_from_plan(baseline), inst.zoning_from_plan(candidate), travel);
}

nlohmann::json to_json(const OutcomeReport& r) {
  nlohmann::json groups = nlohmann::json::array();
  for (const auto& g : r.groups) {
    groups.push_back({{"group", group_name(g.group)},
                      {"students", g.students},
                      {"switchers", g.switchers},
                      {"switcher_fraction", g.switcher_fraction},
                      {"mean_travel_delta_minutes", g.mean_travel_delta_minutes},
                      {"segregation_before", opt(g.segregation_before)},
                      {"segregation_after", opt(g.segregation_after)},
                      {"absolute_change", opt(g.absolute_change)},
                      {"relative_change", opt(g.relative_change)}});
  }
  nlohmann::json schools = nlohmann::json::array();
  for (const auto& s : r.schools) {
    nlohmann::json before = nlohmann::json::object();
    nlohmann::json after = nlohmann::json::object();
    for (Group g : kAllGroups) {
      before[std::string(group_name(g))] = s.share_before[static_cast<std::size_t>(g)];
      after[std::string(group_name(g))] = s.share_after[static_cast<std::size_t>(g)];
    }
    schools.push_back({{"school_id", s.school_id},
                       {"students_before", s.before.total()},
                       {"students_after", s.after.total()},
                       {"counts_before", group_counts_to_json(s.before)},
                       {"counts_after", group_counts_to_json(s.after)},
                       {"share_before", before},
                       {"share_after", after}});
  }
  return {{"students", r.students},
          {"switchers", r.switchers},
          {"switcher_fraction", r.switcher_fraction},
          {"mean_travel_delta_minutes", r.mean_travel_delta_minutes},
          {"groups", groups},
          {"schools", schools}};
}

std::string to_csv(const OutcomeReport& r) {
  std::ostringstream out;
  out << "kind,id,students,switchers,switcher_fraction,mean_travel_delta_minutes,segregation_before,"
         "segregation_after,absolute_change,relative_change,students_before,students_after";
  for (const char* when : {"before", "after"}) {
    for (Group g : kAllGroups) out << ",share_" << when << "_" << group_name(g);
  }
  out << "\n";
  for (const auto& g : r.groups) {
    out << "group," << group_name(g.group) << "," << g.students << "," << g.switchers << ","
        << cell(g.switcher_fraction) << "," << cell(g.mean_travel_delta_minutes) << "," << cell(g.segregation_before)
        << "," << cell(g.segregation_after) << "," << cell(g.absolute_change) << "," << cell(g.relative_change)
        << ",,";
    for (std::size_t i = 0; i < 2 * kGroupCount; ++i) out << ",";
    out << "\n";
  }
  for (const auto& s : r.schools) {
    out << "school," << csv_escape(s.school_id) << ",,,,,,,,," << s.before.total() << "," << s.after.total();
    for (double v : s.share_before) out << "," << cell(v);
    for (double v : s.share_after) out << "," << cell(v);
    out << "\n";
  }
  return out.str();
}

}  // namespace rezoner
