#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rezoner/outcome.hpp"
#include "rezoner/solver.hpp"

namespace rezoner {

struct SweepRow {
  ConstraintConfig config;
  std::optional<SolveResult> result;
  std::optional<OutcomeReport> outcome;
  /// White/non-White dissimilarity, baseline and optimized.
  double dissimilarity_before = 0.0;
  double dissimilarity_after = 0.0;
  /// (after - before) / before; negative means less segregation.
  double relative_change = 0.0;
  double switcher_fraction = 0.0;
  double mean_travel_delta_minutes = 0.0;
  /// Non-empty when this configuration failed; other rows are unaffected.
  std::string error;

  bool ok() const { return error.empty(); }
};

/// The four standard configurations: travel increase 0.5 and 1.0, each with
/// and without contiguity. Everything else is copied from `base`.
std::vector<ConstraintConfig> sweep_configs(const ConstraintConfig& base);

/// Solves each configuration independently (no warm starts), in parallel on
/// up to `workers` threads; 0 reads REZONER_WORKERS and falls back to the
/// hardware concurrency. Rows come back in sweep_configs() order.
std::vector<SweepRow> sweep(const Instance& instance, const std::vector<ConstraintConfig>& configs,
                            const TravelTimeProvider& travel, unsigned workers = 0);

nlohmann::json to_json(const std::vector<SweepRow>& rows);
std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace rezoner
