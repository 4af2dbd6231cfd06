// Acceptance suite: one PASS/FAIL line per criterion; exits nonzero when any
// fails. --skip-sweep leaves out the slow sweep criterion.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "rezoner/cli.hpp"
#include "rezoner/constraints.hpp"
#include "rezoner/estimation.hpp"
#include "rezoner/files.hpp"
#include "rezoner/metrics.hpp"
#include "rezoner/objective.hpp"
#include "rezoner/solver.hpp"
#include "rezoner/sweep.hpp"
#include "rezoner/synthetic.hpp"

namespace {

using namespace rezoner;
using testing::BigRational;
using Clock = std::chrono::steady_clock;

struct Verdict {
  bool ok = true;
  std::string detail;
  void require(bool cond, const std::string& what) {
    if (!cond && ok) detail = what;
    ok = ok && cond;
  }
};

struct Criterion {
  const char* name;
  double limit_seconds;
  std::function<Verdict()> run;
};

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

AssignmentPlan random_plan(Rng& rng, const District& d) {
  AssignmentPlan p;
  for (const auto& b : d.blocks) p[b.id] = d.schools[rng.below(d.schools.size())].id;
  for (const auto& s : d.schools) p[s.containing_block_id] = s.id;
  return p;
}

bool matches(const SegregationScore& s, const BigRational& want) {
  return s.exact && BigRational(s.exact->num, s.exact->den) == want;
}

// --- metric correctness ------------------------------------------------------

Verdict metric_correctness() {
  Verdict v;
  auto pair = [](std::int64_t w0, std::int64_t n0, std::int64_t w1, std::int64_t n1) {
    return std::vector<GroupCounts>{testing::wb(w0, n0), testing::wb(w1, n1)};
  };
  const auto half = dissimilarity(pair(10, 30, 30, 10), Group::White);
  const auto zero = dissimilarity(pair(3, 9, 1, 3), Group::White);
  const auto one = dissimilarity(pair(17, 0, 0, 23), Group::White);
  v.require(*half.exact == (Fraction{1, 2}) && half.value == 0.5, "half-separated fixture is not exactly 1/2");
  v.require(*zero.exact == (Fraction{0, 1}) && zero.value == 0.0, "proportional fixture is not exactly 0");
  v.require(*one.exact == (Fraction{1, 1}) && one.value == 1.0, "separated fixture is not exactly 1");

  Rng rng(1001);
  for (int i = 0; i < 1000 && v.ok; ++i) {
    const auto d = testing::random_district(rng, {});
    const auto p = random_plan(rng, d);
    const auto exact = testing::exact_dissimilarity(d, p);
    v.require(matches(dissimilarity(d, p), exact), fmt("instance %d disagrees with the exact oracle", i));

    auto scaled = d;
    const auto k = rng.between(2, 9);
    auto scale = [k](GroupCounts& c) {
      for (auto& x : c.by_group) x *= k;
    };
    for (auto& [b, c] : scaled.students_per_block) scale(c);
    for (auto& b : scaled.blocks) scale(b.census_children);
    for (auto& s : scaled.schools) scale(s.enrollment_by_group);
    v.require(matches(dissimilarity(scaled, p), exact), fmt("instance %d changes under scaling by %lld", i,
                                                            static_cast<long long>(k)));

    std::map<SchoolId, SchoolId> rename;
    for (std::size_t s = 0; s < d.schools.size(); ++s) rename[d.schools[s].id] = "r" + std::to_string(99 - s);
    auto relabeled = d;
    for (auto& s : relabeled.schools) s.id = rename.at(s.id);
    for (auto& [b, s] : relabeled.baseline_plan) s = rename.at(s);
    AssignmentPlan q;
    for (const auto& [b, s] : p) q[b] = rename.at(s);
    v.require(matches(dissimilarity(relabeled, q), exact), fmt("instance %d changes under relabeling", i));
  }
  return v;
}

// --- estimation conservation ---------------------------------------------------

AllocationInput random_allocation(Rng& rng) {
  AllocationInput in;
  const auto schools = rng.between(1, 5);
  int block = 0;
  for (int s = 0; s < schools; ++s) {
    const auto sid = "s" + std::to_string(s);
    GroupCounts zone;
    for (auto n = rng.between(1, 10); n > 0; --n) {
      const auto bid = "b" + std::to_string(block++);
      GroupCounts c;
      for (Group g : kAllGroups) c[g] = rng.unit() < 0.3 ? 0 : rng.between(0, 40);
      in.zones[sid].push_back(bid);
      in.census[bid] = c;
      zone += c;
    }
    GroupCounts e;
    if (zone.total() > 0) {
      for (Group g : kAllGroups) e[g] = rng.between(0, zone[g] + 20);
    }
    in.enrollment[sid] = e;
  }
  return in;
}

Verdict estimation_conservation() {
  Verdict v;
  Rng rng(2002);
  for (int i = 0; i < 500 && v.ok; ++i) {
    const auto in = random_allocation(rng);
    const auto out = allocate_students(in);
    for (const auto& [s, blocks] : in.zones) {
      GroupCounts sum;
      for (const auto& b : blocks) {
        for (Group g : kAllGroups) v.require(out.at(b)[g] >= 0, fmt("input %d: negative count", i));
        sum += out.at(b);
      }
      v.require(sum == in.enrollment.at(s), fmt("input %d: school %s not conserved", i, s.c_str()));
    }
    v.require(allocate_students(in) == out, fmt("input %d: not deterministic", i));
  }
  return v;
}

// --- feasibility semantics ------------------------------------------------------

ConstraintConfig random_config(Rng& rng) {
  const double xs[] = {0.0, 0.1, 0.5, 1.0, 3.0};
  const double ys[] = {0.0, 0.05, 0.15, 0.5};
  ConstraintConfig c;
  c.max_travel_increase_fraction = xs[rng.below(5)];
  c.max_size_increase_fraction = ys[rng.below(4)];
  c.enforce_contiguity = rng.unit() < 0.5;
  return c;
}

Verdict feasibility_semantics() {
  Verdict v;
  Rng rng(3003);
  long checked = 0;
  for (int i = 0; i < 200 && v.ok; ++i) {
    const auto d = testing::random_district(rng, {.island_rate = 0.3});
    const auto travel = testing::random_matrix(rng, d, 0, 1200);
    const auto c = random_config(rng);
    const auto inst = Instance::compile(d);
    const FeasibilityModel model(inst, c, travel);
    v.require(check_feasibility(model, inst.baseline()).empty(), fmt("instance %d: status quo infeasible", i));

    auto z = inst.baseline();
    const auto scope = c.enforce_contiguity ? MoveScope::Boundary : MoveScope::AnySchool;
    for (int step = 0; step < 6; ++step) {
      const auto moves = enumerate_moves(model, z, scope);
      for (const auto& m : moves) {
        auto next = z;
        next[m.block] = m.to;
        ++checked;
        v.require(check_feasibility(model, next).empty() &&
                      testing::oracle_violations(d, inst.plan_from_zoning(next), c, travel).empty(),
                  fmt("instance %d: move of block %d makes the plan infeasible", i, m.block));
      }
      if (moves.empty()) break;
      const auto m = moves[rng.below(moves.size())];
      z[m.block] = m.to;
    }
    const auto plan = random_plan(rng, d);
    v.require(contiguous_blocks(d, plan) == testing::union_find_contiguous(d, plan),
              fmt("instance %d: contiguity differs from union-find", i));
  }
  if (v.ok) v.detail = fmt("200 instances, %ld moves checked", checked);
  return v;
}

// --- oracle suite ----------------------------------------------------------------

Verdict oracle_suite() {
  Verdict v;
  Rng rng(4004);
  int matched = 0;
  int n = 0;
  while (n < 50) {
    const auto d = testing::random_district(rng, {.min_blocks = 6, .max_blocks = 17, .island_rate = 0.2});
    if (d.blocks.size() - d.schools.size() > 14 || d.schools.size() < 2) continue;
    ++n;
    const auto travel = testing::random_matrix(rng, d, 30, 900);
    const auto inst = Instance::compile(d);
    ConstraintConfig c;
    c.time_budget_seconds = 5.0;
    c.restarts = 10;
    c.seed = rng.next();
    c.max_travel_increase_fraction = rng.unit() < 0.5 ? 0.5 : 1.0;
    c.enforce_contiguity = rng.unit() < 0.5;

    const auto exact = brute_force(inst, c, travel);
    const auto r = solve(inst, c, travel);
    const auto got = *dissimilarity(inst, r.best_zoning).exact;
    const auto best = *dissimilarity(inst, exact.best_zoning).exact;
    const auto gotq = BigRational(got.num, got.den);
    const auto bestq = BigRational(best.num, best.den);
    v.require(gotq >= bestq, fmt("instance %d: solve beat the proved optimum", n));
    if (gotq == bestq) ++matched;

    auto at = [&](double x, bool contiguity) {
      auto k = c;
      k.max_travel_increase_fraction = x;
      k.enforce_contiguity = contiguity;
      const auto e = *dissimilarity(inst, brute_force(inst, k, travel).best_zoning).exact;
      return BigRational(e.num, e.den);
    };
    const auto on5 = at(0.5, true), on10 = at(1.0, true), off5 = at(0.5, false), off10 = at(1.0, false);
    v.require(on10 <= on5 && off10 <= off5 && off5 <= on5 && off10 <= on10,
              fmt("instance %d: relaxing a constraint raised the optimum", n));
  }
  v.require(matched >= 45, fmt("solve matched the optimum on %d/50", matched));
  if (v.ok) v.detail = fmt("matched %d/50", matched);
  return v;
}

// --- incremental objective --------------------------------------------------------

Verdict incremental_equivalence() {
  Verdict v;
  Rng rng(5005);
  long moves = 0;
  while (moves < 100000 && v.ok) {
    const auto d = testing::random_district(rng, {.max_blocks = 30, .max_schools = 5});
    const auto inst = Instance::compile(d);
    ObjectiveTracker tracker(inst, ObjectiveMode::Dissimilarity);
    Zoning z = inst.baseline();
    tracker.reset(z);
    for (int m = 0; m < 1000 && moves < 100000; ++m, ++moves) {
      const auto b = static_cast<std::int32_t>(rng.below(inst.block_count()));
      const auto to = static_cast<std::int32_t>(rng.below(inst.school_count()));
      tracker.move(b, z[b], to);
      z[b] = to;
      const auto full = dissimilarity_numerator(inst.school_counts(z), Group::White);
      v.require(tracker.dissimilarity_numerator() == full, fmt("move %ld: incremental numerator drifted", moves));
      if (m % 100 == 99) {
        v.require(BigRational(tracker.dissimilarity_numerator(), 2 * tracker.term_denominator()) ==
                      testing::exact_dissimilarity(d, inst.plan_from_zoning(z)),
                  fmt("move %ld: incremental value differs from the exact oracle", moves));
      }
    }
  }
  if (v.ok) v.detail = fmt("%ld moves", moves);
  return v;
}

// --- sweep -------------------------------------------------------------------------

Verdict directional_sweep() {
  Verdict v;
  DemographicGradient g;
  g.shape = DemographicGradient::Shape::Step;
  g.west_white_share = 0.9;
  g.east_white_share = 0.1;
  g.block_noise = 0.2;
  g.homogeneous_blocks = 0.5;
  SyntheticLayout layout;
  layout.aspect = 4.0;
  layout.school_spread = 0.5;
  layout.arterial_spacing = 5;
  layout.cross_arterials = false;
  layout.arterial_speed_kmh = 80.0;
  const std::uint64_t seed = 11;
  const auto d = generate_synthetic_district(400, 8, g, seed, layout);
  const auto inst = Instance::compile(d);
  ConstraintConfig base;
  base.time_budget_seconds = 120.0;
  base.seed = seed;
  const auto rows = sweep(inst, sweep_configs(base), TravelTimeProvider::matrix(synthetic_travel_times(d, layout)));

  for (const auto& r : rows) v.require(r.ok(), "a sweep row failed: " + r.error);
  if (!v.ok) return v;
  double red[4];
  for (int i = 0; i < 4; ++i) red[i] = -rows[i].relative_change;
  v.require(rows[0].dissimilarity_before >= 0.6, fmt("baseline dissimilarity %.3f < 0.6", rows[0].dissimilarity_before));
  v.require(red[0] <= red[1] && red[1] <= red[2] && red[2] <= red[3],
            fmt("ordering broken: %.3f %.3f %.3f %.3f", red[0], red[1], red[2], red[3]));
  v.require(red[0] >= 0.10, fmt("(0.5,on) reduction %.3f < 0.10", red[0]));
  v.require(rows[0].switcher_fraction <= 0.35, fmt("(0.5,on) switchers %.3f > 0.35", rows[0].switcher_fraction));
  if (v.ok) {
    v.detail = fmt("D=%.3f reductions %.3f %.3f %.3f %.3f, switchers %.3f", rows[0].dissimilarity_before, red[0],
                   red[1], red[2], red[3], rows[0].switcher_fraction);
  }
  return v;
}

// --- determinism -------------------------------------------------------------------

Verdict cli_replay() {
  Verdict v;
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "rezoner_acceptance_replay";
  fs::remove_all(dir);
  auto run = [&](std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return code == 0 ? std::string() : err.str() + out.str();
  };
  const auto gen = (dir / "gen").string();
  const auto district = gen + "/district.json";
  const auto travel = gen + "/travel.csv";
  const std::vector<std::pair<std::string, std::vector<std::string>>> runs = {
      {"generate", {"generate", "--blocks", "100", "--schools", "4", "--gradient", "step", "--seed", "3", "--out", gen}},
      {"solve", {"solve", "--district", district, "--travel", travel, "--budget", "5", "--seed", "17", "--out",
                 (dir / "solve").string()}},
      {"sweep", {"sweep", "--district", district, "--travel", travel, "--budget", "2", "--out",
                 (dir / "sweep").string()}},
      {"report", {"report", "--district", district, "--plan", (dir / "solve" / "plan.json").string(), "--travel",
                  travel, "--out", (dir / "report").string()}},
  };
  for (const auto& [name, args] : runs) {
    const auto e = run(args);
    v.require(e.empty(), name + " failed: " + e);
    if (!v.ok) break;
    const auto out = fs::path(args.back());
    const auto again = dir / (name + "_replay");
    v.require(run({"replay", "--manifest", (out / "manifest.json").string(), "--out", again.string()}).empty(),
              name + " replay reported a difference");
    for (const auto& f : fs::directory_iterator(again)) {
      v.require(read_file(f.path()) == read_file(out / f.path().filename()),
                name + ": " + f.path().filename().string() + " differs on replay");
    }
  }
  fs::remove_all(dir);
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  bool skip_sweep = false;
  for (int i = 1; i < argc; ++i) skip_sweep = skip_sweep || std::strcmp(argv[i], "--skip-sweep") == 0;

  const std::vector<Criterion> criteria = {
      {"metric-correctness", 10.0, metric_correctness},
      {"estimation-conservation", 10.0, estimation_conservation},
      {"feasibility-semantics", 30.0, feasibility_semantics},
      {"oracle-suite", 900.0, oracle_suite},
      {"incremental-objective", 0.0, incremental_equivalence},
      {"directional-sweep", 600.0, directional_sweep},
      {"cli-replay-determinism", 0.0, cli_replay},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    if (skip_sweep && std::strcmp(c.name, "directional-sweep") == 0) {
      std::printf("SKIP %s\n", c.name);
      continue;
    }
    const auto t0 = Clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.ok = false;
      v.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (c.limit_seconds > 0 && secs >= c.limit_seconds) {
      if (v.ok) v.detail = fmt("took %.1f s, limit %.0f s", secs, c.limit_seconds);
      v.ok = false;
    }
    std::printf("%s %s (%.1f s)%s%s\n", v.ok ? "PASS" : "FAIL", c.name, secs, v.detail.empty() ? "" : ": ",
                v.detail.c_str());
    std::fflush(stdout);
    failed += v.ok ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
