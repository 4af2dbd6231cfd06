#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rezoner/constraints.hpp"
#include "rezoner/instance.hpp"
#include "rezoner/objective.hpp"
#include "rezoner/travel.hpp"

namespace rezoner {

/// Work is measured in move evaluations. Budgets in seconds are converted at
/// this nominal rate so that results depend only on inputs and seed, never
/// on machine speed.
inline constexpr double kEvaluationsPerSecond = 250000.0;

struct TracePoint {
  double elapsed_seconds = 0.0;  // nominal: evaluations / kEvaluationsPerSecond
  std::int64_t evaluations = 0;
  double objective = 0.0;
};

enum class Termination { TimeBudget, LocalOptimum, ProvedOptimal };
std::string_view termination_name(Termination t);
Termination termination_from_name(std::string_view name);

struct SolveResult {
  AssignmentPlan best_plan;
  Zoning best_zoning;
  double best_objective = 0.0;
  double baseline_objective = 0.0;
  ObjectiveMode mode = ObjectiveMode::Dissimilarity;
  /// Best objective so far, appended whenever it improves. Non-increasing.
  std::vector<TracePoint> trace;
  Termination termination = Termination::LocalOptimum;
  std::uint64_t seed = 0;
  std::int64_t evaluations = 0;
  /// Complete assignments examined by brute_force(); zero for solve().
  std::int64_t plans_enumerated = 0;
};

struct SolveOptions {
  /// Called with each new trace point. Runs on the solving thread.
  std::function<void(const TracePoint&)> on_progress;
  /// Checked between moves; when set the best plan so far is returned.
  const std::atomic<bool>* cancel = nullptr;
};

/// Simulated annealing over single-block moves and pairwise swaps, followed
/// by greedy descent, for `restarts` rounds (the first from the baseline,
/// later ones from the incumbent). Each round's cooling schedule spans an
/// equal share of the time budget. Finally, switched blocks whose return to
/// baseline costs nothing are sent back.
///
/// Every accepted state is feasible, so the returned plan always is. The
/// baseline must itself be feasible (DomainError otherwise).
SolveResult solve(const Instance& instance, const ConstraintConfig& config, const TravelTimeProvider& travel,
                  const SolveOptions& options = {});
SolveResult solve(const District& district, const ConstraintConfig& config, const TravelTimeProvider& travel,
                  const SolveOptions& options = {});

struct BruteForceLimits {
  std::size_t max_free_blocks = 14;
  std::size_t max_schools = 3;
};

/// Exhaustive search over the feasible plans of a small instance. Among
/// optimal plans returns the lexicographically smallest (school ids listed in
/// block id order). Throws DomainError above `limits`.
SolveResult brute_force(const Instance& instance, const ConstraintConfig& config, const TravelTimeProvider& travel,
                        const BruteForceLimits& limits = {});

nlohmann::json to_json(const SolveResult& result);
SolveResult solve_result_from_json(const nlohmann::json& j);
std::string trace_csv(const std::vector<TracePoint>& trace);

}  // namespace rezoner
