#pragma once

#include <map>
#include <string>

#include <nlohmann/json.hpp>

#include "rezoner/instance.hpp"
#include "rezoner/outcome.hpp"
#include "rezoner/solver.hpp"

namespace rezoner {

/// Indented JSON with a trailing newline; the form every artifact is stored in.
std::string pretty_json(const nlohmann::json& j);

/// Files of one solve run, by name: result.json, plan.json, report.json,
/// report.csv and trace.csv. Shared by the CLI and the scenario service.
std::map<std::string, std::string> solve_artifacts(const Instance& instance, const SolveResult& result,
                                                   const OutcomeReport& report);

/// One Feature per block with properties block_id, school_id, baseline_school_id,
/// switched and students; the block's own geometry when the district carries one,
/// otherwise its centroid as a Point. Schools follow as Point features.
nlohmann::json plan_geojson(const District& district, const AssignmentPlan& plan);

/// Baseline metrics of a district: per-group dissimilarity (null when undefined),
/// White interaction exposure, the largest school term and per-school shares.
nlohmann::json baseline_summary(const Instance& instance);

}  // namespace rezoner
