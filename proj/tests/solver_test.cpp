#include <gtest/gtest.h>

#include <atomic>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "rezoner/errors.hpp"
#include "rezoner/metrics.hpp"
#include "rezoner/objective.hpp"
#include "rezoner/solver.hpp"
#include "rezoner/sweep.hpp"
#include "rezoner/synthetic.hpp"

namespace rezoner {
namespace {

using testing::BigRational;
using testing::wb;

District strip(std::vector<GroupCounts> students, std::vector<std::size_t> zone, std::vector<std::size_t> anchors) {
  testing::GridSpec g;
  g.rows = 1;
  g.cols = students.size();
  g.students = std::move(students);
  g.zone = std::move(zone);
  g.anchors = std::move(anchors);
  return testing::grid_district(g);
}

// 16 blocks in a row, two schools at the ends; White-heavy and
// non-White-heavy blocks alternate in pairs, denser to the west.
District interleaved_strip() {
  std::vector<GroupCounts> s;
  std::vector<std::size_t> zone;
  for (std::size_t i = 0; i < 16; ++i) {
    const bool west = i < 8;
    const bool white_pair = (i / 2) % 2 == 0;
    s.push_back(white_pair ? wb(west ? 9 : 6, 2) : wb(2, west ? 5 : 9));
    zone.push_back(west ? 0 : 1);
  }
  return strip(s, zone, {0, 15});
}

ConstraintConfig fast(double budget = 0.4) {
  ConstraintConfig c;
  c.time_budget_seconds = budget;
  c.seed = 7;
  return c;
}

TEST(Solve, IntegratedDistrictStaysPut) {
  const auto d = strip({wb(2, 6), wb(1, 3), wb(3, 9), wb(2, 6)}, {0, 0, 1, 1}, {0, 3});
  const auto r = solve(d, fast(), TravelTimeProvider::estimator());
  EXPECT_EQ(r.best_plan, d.baseline_plan);
  EXPECT_EQ(r.best_objective, 0.0);
  EXPECT_EQ(r.baseline_objective, 0.0);
  EXPECT_EQ(r.termination, Termination::ProvedOptimal);
}

TEST(Solve, InterleavedStripMatchesBruteForce) {
  const auto d = interleaved_strip();
  const auto inst = Instance::compile(d);
  const auto travel = TravelTimeProvider::estimator();
  for (bool contiguity : {true, false}) {
    auto c = fast(2.0);
    c.max_travel_increase_fraction = 10.0;
    c.max_size_increase_fraction = 0.5;
    c.enforce_contiguity = contiguity;
    const auto exact = brute_force(inst, c, travel);
    const auto heuristic = solve(inst, c, travel);
    EXPECT_EQ(exact.termination, Termination::ProvedOptimal);
    EXPECT_LT(exact.best_objective, exact.baseline_objective);
    EXPECT_EQ(heuristic.best_objective, exact.best_objective) << "contiguity " << contiguity;
    const auto oracle = testing::oracle_optimum(d, c, travel);
    EXPECT_EQ(exact.best_plan, oracle.plan);
    EXPECT_DOUBLE_EQ(exact.best_objective, testing::to_double(oracle.value));
  }
}

TEST(Solve, SameSeedSameResult) {
  const auto d = generate_synthetic_district(100, 4, DemographicGradient::step(), 3);
  const auto travel = TravelTimeProvider::matrix(synthetic_travel_times(d));
  const auto a = to_json(solve(d, fast(), travel)).dump();
  const auto b = to_json(solve(d, fast(), travel)).dump();
  EXPECT_EQ(a, b);
  auto other = fast();
  other.seed = 8;
  EXPECT_NE(to_json(solve(d, other, travel)).dump(), a);
}

TEST(Solve, RejectsBadConfig) {
  const auto d = interleaved_strip();
  auto c = fast();
  c.max_travel_increase_fraction = -1.0;
  EXPECT_THROW(solve(d, c, TravelTimeProvider::estimator()), InputError);
  EXPECT_THROW(brute_force(Instance::compile(d), c, TravelTimeProvider::estimator()), InputError);
}

TEST(Solve, CancelReturnsFeasibleIncumbent) {
  const auto d = generate_synthetic_district(100, 4, DemographicGradient::step(), 3);
  const auto travel = TravelTimeProvider::matrix(synthetic_travel_times(d));
  std::atomic<bool> cancel{false};
  SolveOptions options;
  options.cancel = &cancel;
  int calls = 0;
  options.on_progress = [&](const TracePoint&) {
    if (++calls == 3) cancel = true;
  };
  auto c = fast(1000.0);
  const auto r = solve(d, c, travel, options);
  EXPECT_EQ(r.termination, Termination::TimeBudget);
  EXPECT_LT(r.evaluations, static_cast<std::int64_t>(1000.0 * kEvaluationsPerSecond));
  EXPECT_TRUE(check_feasibility(d, r.best_plan, c, travel).empty());
}

TEST(Solve, ProgressMirrorsTrace) {
  const auto d = generate_synthetic_district(64, 3, DemographicGradient{}, 5);
  const auto travel = TravelTimeProvider::matrix(synthetic_travel_times(d));
  std::vector<TracePoint> seen;
  SolveOptions options;
  options.on_progress = [&](const TracePoint& p) { seen.push_back(p); };
  const auto r = solve(d, fast(), travel, options);
  ASSERT_EQ(seen.size(), r.trace.size());
  for (std::size_t i = 0; i < seen.size(); ++i) {
    EXPECT_EQ(seen[i].objective, r.trace[i].objective);
    EXPECT_EQ(seen[i].evaluations, r.trace[i].evaluations);
  }
}

TEST(Solve, JsonRoundTrip) {
  const auto d = interleaved_strip();
  const auto r = solve(d, fast(), TravelTimeProvider::estimator());
  const auto j = to_json(r);
  EXPECT_EQ(to_json(solve_result_from_json(j)).dump(), j.dump());
  const auto csv = trace_csv(r.trace);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "elapsed_seconds,evaluations,objective");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), static_cast<long>(r.trace.size() + 1));
}

TEST(BruteForce, SingleSchoolHasOnePlan) {
  const auto d = strip({wb(2, 1), wb(1, 3), wb(0, 2)}, {0, 0, 0}, {1});
  // One school: the index is still defined (W_T, NW_T > 0), and 0.
  const auto r = brute_force(Instance::compile(d), fast(), TravelTimeProvider::estimator());
  EXPECT_EQ(r.best_plan, d.baseline_plan);
  EXPECT_EQ(r.best_objective, 0.0);
  EXPECT_EQ(r.plans_enumerated, 1);
}

TEST(BruteForce, FourFreeBlocksTwoSchools) {
  const auto d = strip({wb(5, 0), wb(4, 1), wb(3, 2), wb(1, 4), wb(0, 5), wb(2, 2)}, {0, 0, 0, 1, 1, 1}, {0, 4});
  auto c = fast();
  c.max_travel_increase_fraction = 10.0;
  c.max_size_increase_fraction = 1.0;
  c.enforce_contiguity = false;
  const auto travel = TravelTimeProvider::estimator();
  const auto r = brute_force(Instance::compile(d), c, travel);
  EXPECT_LE(r.plans_enumerated, 16);
  const auto oracle = testing::oracle_optimum(d, c, travel);
  EXPECT_EQ(r.best_plan, oracle.plan);
  EXPECT_EQ(BigRational(dissimilarity(d, r.best_plan).exact->num, dissimilarity(d, r.best_plan).exact->den),
            oracle.value);
}

TEST(BruteForce, TightConfigKeepsBaseline) {
  std::vector<GroupCounts> s;
  for (int i = 0; i < 8; ++i) s.push_back(i < 4 ? wb(5, 1) : wb(1, 5));
  const auto d = strip(s, {0, 0, 0, 0, 1, 1, 1, 1}, {0, 7});
  const auto travel = testing::matrix_provider(d, [](std::size_t b, std::size_t k) {
    const double anchor = k == 0 ? 0.0 : 7.0;
    return 100.0 + 60.0 * std::abs(static_cast<double>(b) - anchor) + 0.25 * static_cast<double>(b + k);
  });
  auto c = fast();
  c.max_travel_increase_fraction = 0.0;
  c.enforce_contiguity = false;
  const auto inst = Instance::compile(d);
  EXPECT_EQ(brute_force(inst, c, travel).best_plan, d.baseline_plan);
  EXPECT_EQ(solve(inst, c, travel).best_plan, d.baseline_plan);
}

TEST(BruteForce, RefusesLargeInstances) {
  const auto d = generate_synthetic_district(20, 2, DemographicGradient{}, 1);
  EXPECT_THROW(brute_force(Instance::compile(d), fast(), TravelTimeProvider::estimator()), DomainError);
  const auto four = generate_synthetic_district(8, 4, DemographicGradient{}, 1);
  EXPECT_THROW(brute_force(Instance::compile(four), fast(), TravelTimeProvider::estimator()), DomainError);
}

TEST(Objective, IncrementalEqualsRecomputation) {
  Rng rng(51);
  for (int i = 0; i < 40; ++i) {
    const auto d = testing::random_district(rng, {.max_blocks = 30, .max_schools = 5});
    const auto inst = Instance::compile(d);
    for (auto mode : {ObjectiveMode::Dissimilarity, ObjectiveMode::Leximin, ObjectiveMode::InteractionExposure}) {
      ObjectiveTracker tracker(inst, mode);
      Zoning z = inst.baseline();
      tracker.reset(z);
      for (int m = 0; m < 500; ++m) {
        const auto b = static_cast<std::int32_t>(rng.below(inst.block_count()));
        const auto to = static_cast<std::int32_t>(rng.below(inst.school_count()));
        tracker.move(b, z[b], to);
        z[b] = to;
      }
      const auto counts = inst.school_counts(z);
      EXPECT_EQ(tracker.dissimilarity_numerator(), dissimilarity_numerator(counts, Group::White));
      const auto exact = testing::exact_dissimilarity(d, inst.plan_from_zoning(z));
      EXPECT_EQ(BigRational(tracker.dissimilarity_numerator(), 2 * tracker.term_denominator()), exact);
      EXPECT_EQ(BigRational(tracker.max_term_numerator(), tracker.term_denominator()),
                testing::exact_max_term(d, inst.plan_from_zoning(z)));
      if (mode == ObjectiveMode::InteractionExposure) {
        EXPECT_NEAR(tracker.reported(), 1.0 - interaction_exposure(inst, z).value, 1e-12);
      }
    }
  }
}

// Random small instances: the heuristic never beats the proved optimum,
// never returns worse than baseline, keeps every trace point ordered, and
// returns a plan the independent checker accepts.
TEST(SolveProperties, AgainstOracle) {
  Rng rng(61);
  for (int i = 0; i < 25; ++i) {
    const auto d = testing::random_district(rng, {.min_blocks = 3, .max_blocks = 9, .island_rate = 0.2});
    const auto travel = testing::random_matrix(rng, d, 30, 900);
    ConstraintConfig c = fast(0.05);
    c.seed = rng.next();
    c.max_travel_increase_fraction = rng.unit() < 0.5 ? 0.5 : 1.0;
    c.enforce_contiguity = rng.unit() < 0.5;
    c.objective_mode = rng.unit() < 0.8 ? ObjectiveMode::Dissimilarity : ObjectiveMode::Leximin;
    const auto inst = Instance::compile(d);
    const auto exact = brute_force(inst, c, travel);
    const auto r = solve(inst, c, travel);
    EXPECT_GE(r.best_objective, exact.best_objective - 1e-15);
    EXPECT_LE(r.best_objective, r.baseline_objective);
    EXPECT_TRUE(testing::oracle_violations(d, r.best_plan, c, travel).empty());
    for (std::size_t k = 1; k < r.trace.size(); ++k) {
      EXPECT_LE(r.trace[k].objective, r.trace[k - 1].objective);
      EXPECT_GE(r.trace[k].elapsed_seconds, r.trace[k - 1].elapsed_seconds);
    }
    if (c.objective_mode == ObjectiveMode::Dissimilarity) {
      EXPECT_DOUBLE_EQ(exact.best_objective, testing::to_double(testing::oracle_optimum(d, c, travel).value));
    }
  }
}

TEST(Sweep, IntegratedDistrictRowsAreZero) {
  const auto d = strip({wb(2, 6), wb(1, 3), wb(3, 9), wb(2, 6)}, {0, 0, 1, 1}, {0, 3});
  const auto inst = Instance::compile(d);
  const auto rows = sweep(inst, sweep_configs(fast()), TravelTimeProvider::estimator(), 2);
  ASSERT_EQ(rows.size(), 4u);
  for (const auto& r : rows) {
    ASSERT_TRUE(r.ok()) << r.error;
    EXPECT_EQ(r.relative_change, 0.0);
    EXPECT_EQ(r.switcher_fraction, 0.0);
    EXPECT_EQ(r.mean_travel_delta_minutes, 0.0);
  }
  const auto csv = sweep_csv(rows);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
}

TEST(Sweep, ConfigsInStandardOrder) {
  auto base = fast();
  base.max_size_increase_fraction = 0.3;
  const auto c = sweep_configs(base);
  ASSERT_EQ(c.size(), 4u);
  const std::pair<double, bool> want[] = {{0.5, true}, {1.0, true}, {0.5, false}, {1.0, false}};
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(c[i].max_travel_increase_fraction, want[i].first);
    EXPECT_EQ(c[i].enforce_contiguity, want[i].second);
    EXPECT_EQ(c[i].max_size_increase_fraction, 0.3);
    EXPECT_EQ(c[i].seed, base.seed);
  }
}

TEST(Sweep, RowsReproduceIndividualSolves) {
  const auto d = generate_synthetic_district(49, 3, DemographicGradient::step(), 2);
  const auto inst = Instance::compile(d);
  const auto travel = TravelTimeProvider::matrix(synthetic_travel_times(d));
  const auto configs = sweep_configs(fast(0.2));
  const auto rows = sweep(inst, configs, travel, 3);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ASSERT_TRUE(rows[i].ok());
    EXPECT_EQ(to_json(*rows[i].result).dump(), to_json(solve(inst, configs[i], travel)).dump());
  }
}

TEST(Sweep, FailingRowDoesNotStopOthers) {
  const auto d = interleaved_strip();
  const auto inst = Instance::compile(d);
  auto configs = sweep_configs(fast(0.1));
  configs[1].max_size_increase_fraction = -0.5;
  const auto rows = sweep(inst, configs, TravelTimeProvider::estimator(), 1);
  EXPECT_TRUE(rows[0].ok());
  EXPECT_FALSE(rows[1].ok());
  EXPECT_TRUE(rows[2].ok());
  EXPECT_TRUE(rows[3].ok());
}

}  // namespace
}  // namespace rezoner
