#include "rezoner/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rezoner/district_io.hpp"
#include "rezoner/errors.hpp"
#include "rezoner/rng.hpp"

namespace rezoner {

namespace {

constexpr std::int64_t kStagnationLimit = 10000;
constexpr std::int64_t kTemperatureLevels = 100;
constexpr double kSwapProbability = 0.1;
constexpr double kFinalTemperatureRatio = 1e-3;
constexpr int kCalibrationSamples = 400;
// Share of the budget given to annealing; the rest covers descent.
constexpr double kAnnealShare = 0.9;

struct Proposal {
  std::int32_t block = -1;
  std::int32_t from = -1;
  std::int32_t to = -1;
  std::int32_t partner = -1;  // swap: moves to -> from
};

// Mutable search state. Every state it holds is feasible.
class Search {
 public:
  Search(const FeasibilityModel& model, ObjectiveTracker& tracker)
      : model_(model),
        inst_(model.instance()),
        tracker_(tracker),
        contiguity_(model.config().enforce_contiguity),
        reach_(inst_),
        size_(inst_.school_count()),
        constrained_count_(inst_.school_count()),
        members_(inst_.school_count()),
        position_(inst_.block_count()) {
    for (std::size_t b = 0; b < inst_.block_count(); ++b) {
      if (inst_.anchored_school(b) >= 0) continue;
      movable_.push_back(static_cast<std::int32_t>(b));
    }
    targets_.resize(inst_.block_count());
    for (auto b : movable_) {
      for (std::size_t s = 0; s < inst_.school_count(); ++s) {
        if (model.allowed(b, s)) targets_[b].push_back(static_cast<std::int32_t>(s));
      }
    }
  }

  const std::vector<std::int32_t>& movable() const { return movable_; }
  const Zoning& zoning() const { return zoning_; }

  void load(const Zoning& z) {
    zoning_ = z;
    tracker_.reset(z);
    std::fill(size_.begin(), size_.end(), 0);
    std::fill(constrained_count_.begin(), constrained_count_.end(), 0);
    for (auto& m : members_) m.clear();
    for (std::size_t b = 0; b < z.size(); ++b) {
      size_[z[b]] += inst_.student_total(b);
      if (model_.constrained(b)) ++constrained_count_[z[b]];
      if (inst_.anchored_school(b) < 0) {
        position_[b] = members_[z[b]].size();
        members_[z[b]].push_back(static_cast<std::int32_t>(b));
      }
    }
  }

  // Draws a proposal and applies it when feasible. Returns false (state
  // untouched) otherwise.
  bool propose(Rng& rng, Proposal& p) {
    p = {};
    p.block = movable_[rng.below(movable_.size())];
    p.from = zoning_[p.block];
    if (contiguity_) {
      const auto nbrs = inst_.neighbors(p.block);
      if (nbrs.empty()) return false;
      const auto n = nbrs[rng.below(nbrs.size())];
      p.to = zoning_[n];
      if (p.to == p.from) return false;
      if (rng.unit() < kSwapProbability) {
        if (inst_.anchored_school(n) >= 0) return false;
        p.partner = n;
      }
    } else {
      const auto& t = targets_[p.block];
      p.to = t[rng.below(t.size())];
      if (p.to == p.from) return false;
      if (rng.unit() < kSwapProbability) {
        const auto& m = members_[p.to];
        if (m.empty()) return false;
        p.partner = m[rng.below(m.size())];
      }
    }
    return p.partner < 0 ? try_move(p) : try_swap(p);
  }

  void revert(const Proposal& p) {
    shift(p.block, p.to, p.from);
    if (p.partner >= 0) shift(p.partner, p.from, p.to);
  }

  void apply_move(const Move& m) { shift(m.block, m.from, m.to); }

  // Applies a given single-block proposal when feasible.
  bool try_apply(const Proposal& p) { return try_move(p); }

 private:
  bool try_move(const Proposal& p) {
    const auto b = p.block;
    if (!model_.allowed(b, p.to)) return false;
    if (size_[p.to] + inst_.student_total(b) > model_.size_cap(p.to)) return false;
    if (contiguity_) {
      if (!joins(b, p.to)) return false;
      if (!donor_intact(b, p.from)) return false;
    }
    shift(b, p.from, p.to);
    return true;
  }

  bool try_swap(const Proposal& p) {
    const auto a = p.block;
    const auto c = p.partner;
    if (!model_.allowed(a, p.to) || !model_.allowed(c, p.from)) return false;
    const auto sa = inst_.student_total(a);
    const auto sc = inst_.student_total(c);
    if (size_[p.to] - sc + sa > model_.size_cap(p.to)) return false;
    if (size_[p.from] - sa + sc > model_.size_cap(p.from)) return false;
    shift(a, p.from, p.to);
    shift(c, p.to, p.from);
    if (contiguity_ && !(zone_intact(p.from, c) && zone_intact(p.to, a))) {
      revert(p);
      return false;
    }
    return true;
  }

  // b would touch a block already connected to school s's anchor.
  bool joins(std::int32_t b, std::int32_t s) {
    for (auto n : inst_.neighbors(b)) {
      if (n == inst_.anchor_block(s)) return true;
    }
    reach_.run(zoning_, s);
    for (auto n : inst_.neighbors(b)) {
      if (zoning_[n] == s && reach_.reached(n)) return true;
    }
    return false;
  }

  // Removing b leaves every constrained block of zone s connected.
  bool donor_intact(std::int32_t b, std::int32_t s) {
    int same = 0;
    for (auto n : inst_.neighbors(b)) same += zoning_[n] == s ? 1 : 0;
    if (same <= 1) return true;  // a leaf cannot disconnect anything
    reach_.run(zoning_, s, b);
    std::int64_t kept = 0;
    for (auto v : reach_.visited()) kept += model_.constrained(v) ? 1 : 0;
    return kept == constrained_count_[s] - (model_.constrained(b) ? 1 : 0);
  }

  bool zone_intact(std::int32_t s, std::int32_t must_reach) {
    reach_.run(zoning_, s);
    if (!reach_.reached(must_reach)) return false;
    std::int64_t kept = 0;
    for (auto v : reach_.visited()) kept += model_.constrained(v) ? 1 : 0;
    return kept == constrained_count_[s];
  }

  void shift(std::int32_t b, std::int32_t from, std::int32_t to) {
    zoning_[b] = to;
    tracker_.move(b, from, to);
    const auto n = inst_.student_total(b);
    size_[from] -= n;
    size_[to] += n;
    if (model_.constrained(b)) {
      --constrained_count_[from];
      ++constrained_count_[to];
    }
    auto& src = members_[from];
    const auto pos = position_[b];
    src[pos] = src.back();
    position_[src[pos]] = pos;
    src.pop_back();
    position_[b] = members_[to].size();
    members_[to].push_back(b);
  }

  const FeasibilityModel& model_;
  const Instance& inst_;
  ObjectiveTracker& tracker_;
  bool contiguity_;
  ZoneReach reach_;
  Zoning zoning_;
  std::vector<std::int64_t> size_;
  std::vector<std::int64_t> constrained_count_;
  std::vector<std::vector<std::int32_t>> members_;
  std::vector<std::size_t> position_;
  std::vector<std::int32_t> movable_;
  std::vector<std::vector<std::int32_t>> targets_;
};

bool is_zero(const ObjectiveValue& v, ObjectiveMode mode) {
  return mode != ObjectiveMode::InteractionExposure && v.primary == 0;
}

class Driver {
 public:
  Driver(const Instance& inst, const ConstraintConfig& config, const TravelTimeProvider& travel,
         const SolveOptions& options)
      : inst_(inst),
        config_(config),
        options_(options),
        model_(inst, config, travel),
        tracker_(inst, config.objective_mode),
        search_(model_, tracker_) {
    const double budget = std::max(0.0, config.time_budget_seconds) * kEvaluationsPerSecond;
    budget_ = budget >= 9e18 ? INT64_MAX : static_cast<std::int64_t>(budget);
  }

  SolveResult run() {
    const auto violations = check_feasibility(model_, inst_.baseline());
    if (!violations.empty()) {
      throw DomainError("baseline plan is infeasible: " + violations.front().detail);
    }
    result_.mode = config_.objective_mode;
    result_.seed = config_.seed;
    tracker_.reset(inst_.baseline());
    best_ = tracker_.value();
    best_zoning_ = inst_.baseline();
    result_.baseline_objective = tracker_.reported();
    record(tracker_.reported());

    bool out_of_budget = false;
    const bool trivial = search_.movable().empty() || inst_.school_count() < 2;
    if (!trivial && !is_zero(best_, config_.objective_mode)) {
      const int restarts = std::max(1, config_.restarts);
      const auto allotment = static_cast<std::int64_t>(kAnnealShare * static_cast<double>(budget_) / restarts);
      for (int k = 0; k < restarts && !out_of_budget; ++k) {
        Rng rng(mix_seed(mix_seed(config_.seed) + static_cast<std::uint64_t>(k)));
        out_of_budget = !anneal(rng, best_zoning_, allotment);
        if (!out_of_budget) out_of_budget = !descend();
        if (is_zero(best_, config_.objective_mode)) break;
      }
      settle();
    }

    result_.best_zoning = best_zoning_;
    result_.best_plan = inst_.plan_from_zoning(best_zoning_);
    result_.best_objective = result_.trace.back().objective;
    result_.evaluations = evaluations_;
    if (trivial || is_zero(best_, config_.objective_mode)) {
      result_.termination = Termination::ProvedOptimal;
    } else if (out_of_budget) {
      result_.termination = Termination::TimeBudget;
    } else {
      result_.termination = Termination::LocalOptimum;
    }
    if (!check_feasibility(model_, best_zoning_).empty()) {
      throw std::logic_error("solver produced an infeasible plan");
    }
    return std::move(result_);
  }

 private:
  bool spend() {
    if (evaluations_ >= budget_) return false;
    if (options_.cancel != nullptr && options_.cancel->load(std::memory_order_relaxed)) return false;
    ++evaluations_;
    return true;
  }

  void record(double objective) {
    TracePoint t{static_cast<double>(evaluations_) / kEvaluationsPerSecond, evaluations_, objective};
    result_.trace.push_back(t);
    if (options_.on_progress) options_.on_progress(t);
  }

  void offer(const Zoning& z) {
    const auto v = tracker_.value();
    if (!better(v, best_, config_.objective_mode)) return;
    best_ = v;
    best_zoning_ = z;
    record(tracker_.reported());
  }

  double calibrate(Rng& rng) {
    double sum = 0.0;
    int uphill = 0;
    const double e0 = tracker_.energy();
    Proposal p;
    for (int i = 0; i < kCalibrationSamples; ++i) {
      if (!spend()) break;
      if (!search_.propose(rng, p)) continue;
      const double d = tracker_.energy() - e0;
      search_.revert(p);
      if (d > 0.0) {
        sum += d;
        ++uphill;
      }
    }
    if (uphill == 0) return 1e-12;
    return sum / uphill / std::log(2.0);
  }

  // Returns false when the budget ran out.
  bool anneal(Rng& rng, const Zoning& start, std::int64_t allotment) {
    search_.load(start);
    Zoning run_best = start;
    ObjectiveValue run_best_value = tracker_.value();

    const double t0 = calibrate(rng);
    const double alpha = std::pow(kFinalTemperatureRatio, 1.0 / static_cast<double>(kTemperatureLevels - 1));
    const auto per_level = std::max<std::int64_t>(1, allotment / kTemperatureLevels);

    double temperature = t0;
    double energy = tracker_.energy();
    std::int64_t rejected = 0;
    Proposal p;
    for (std::int64_t level = 0; level < kTemperatureLevels; ++level, temperature *= alpha) {
      for (std::int64_t i = 0; i < per_level; ++i) {
        if (!spend()) return false;
        bool accepted = false;
        if (search_.propose(rng, p)) {
          const double e1 = tracker_.energy();
          const double delta = e1 - energy;
          if (delta <= 0.0 || rng.unit() < std::exp(-delta / temperature)) {
            accepted = true;
            energy = e1;
          } else {
            search_.revert(p);
          }
        }
        if (accepted) {
          rejected = 0;
          const auto v = tracker_.value();
          if (better(v, run_best_value, config_.objective_mode)) {
            run_best_value = v;
            run_best = search_.zoning();
            offer(run_best);
            if (is_zero(v, config_.objective_mode)) return true;
          }
        } else if (++rejected >= kStagnationLimit) {
          search_.load(run_best);
          energy = tracker_.energy();
          rejected = 0;
        }
      }
    }
    search_.load(run_best);
    return true;
  }

  // Best-improvement descent over single-block moves from the search state.
  bool descend() {
    const auto scope = config_.enforce_contiguity ? MoveScope::Boundary : MoveScope::AnySchool;
    for (;;) {
      const auto moves = enumerate_moves(model_, search_.zoning(), scope);
      const auto here = tracker_.value();
      ObjectiveValue best_value = here;
      const Move* pick = nullptr;
      for (const auto& m : moves) {
        if (!spend()) return false;
        tracker_.move(m.block, m.from, m.to);
        const auto v = tracker_.value();
        tracker_.move(m.block, m.to, m.from);
        if (better(v, best_value, config_.objective_mode)) {
          best_value = v;
          pick = &m;
        }
      }
      if (pick == nullptr) return true;
      search_.apply_move(*pick);
      offer(search_.zoning());
    }
  }

  // Sends switched blocks back to their baseline school whenever that keeps
  // the plan feasible and the objective no worse. Objective-neutral moves
  // accepted during annealing would otherwise count as switchers.
  void settle() {
    search_.load(best_zoning_);
    const auto& base = inst_.baseline();
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t bi = 0; bi < base.size(); ++bi) {
        const auto b = static_cast<std::int32_t>(bi);
        const auto from = search_.zoning()[b];
        if (from == base[b]) continue;
        const auto here = tracker_.value();
        ++evaluations_;
        Proposal p{b, from, base[b], -1};
        if (!search_.try_apply(p)) continue;
        if (better(here, tracker_.value(), config_.objective_mode)) {
          search_.revert(p);
          continue;
        }
        changed = true;
      }
    }
    const auto v = tracker_.value();
    if (better(v, best_, config_.objective_mode)) {
      offer(search_.zoning());
    } else {
      best_zoning_ = search_.zoning();
    }
  }

  const Instance& inst_;
  ConstraintConfig config_;
  SolveOptions options_;
  FeasibilityModel model_;
  ObjectiveTracker tracker_;
  Search search_;
  std::int64_t budget_ = 0;
  std::int64_t evaluations_ = 0;
  ObjectiveValue best_;
  Zoning best_zoning_;
  SolveResult result_;
};

// Depth-first enumeration in (block index, school index) order; only a
// strictly better leaf replaces the incumbent, so ties keep the
// lexicographically smallest plan.
class Enumerator {
 public:
  Enumerator(const FeasibilityModel& model, ObjectiveTracker& tracker)
      : model_(model), inst_(model.instance()), tracker_(tracker), reach_(inst_), size_(inst_.school_count(), 0) {
    zoning_ = inst_.baseline();
    for (std::size_t b = 0; b < inst_.block_count(); ++b) {
      if (inst_.anchored_school(b) >= 0) {
        size_[zoning_[b]] += inst_.student_total(b);
      } else {
        free_.push_back(static_cast<std::int32_t>(b));
      }
    }
    tracker_.reset(zoning_);
  }

  std::size_t free_count() const { return free_.size(); }

  void run() { visit(0); }

  bool found() const { return found_; }
  const Zoning& best() const { return best_zoning_; }
  std::int64_t leaves() const { return leaves_; }

 private:
  void visit(std::size_t depth) {
    if (depth == free_.size()) {
      ++leaves_;
      if (model_.config().enforce_contiguity && !contiguous()) return;
      const auto v = tracker_.value();
      if (!found_ || better(v, best_value_, model_.config().objective_mode)) {
        found_ = true;
        best_value_ = v;
        best_zoning_ = zoning_;
      }
      return;
    }
    const auto b = free_[depth];
    const auto n = inst_.student_total(b);
    for (std::size_t si = 0; si < inst_.school_count(); ++si) {
      const auto s = static_cast<std::int32_t>(si);
      if (!model_.allowed(b, s) || size_[s] + n > model_.size_cap(s)) continue;
      const auto prev = zoning_[b];
      tracker_.move(b, prev, s);
      zoning_[b] = s;
      size_[s] += n;
      visit(depth + 1);
      size_[s] -= n;
      zoning_[b] = prev;
      tracker_.move(b, s, prev);
    }
  }

  bool contiguous() {
    std::vector<std::int64_t> need(inst_.school_count(), 0);
    for (std::size_t b = 0; b < zoning_.size(); ++b) {
      if (model_.constrained(b)) ++need[zoning_[b]];
    }
    for (std::size_t s = 0; s < inst_.school_count(); ++s) {
      reach_.run(zoning_, static_cast<std::int32_t>(s));
      std::int64_t got = 0;
      for (auto v : reach_.visited()) got += model_.constrained(v) ? 1 : 0;
      if (got != need[s]) return false;
    }
    return true;
  }

  const FeasibilityModel& model_;
  const Instance& inst_;
  ObjectiveTracker& tracker_;
  ZoneReach reach_;
  Zoning zoning_;
  std::vector<std::int64_t> size_;
  std::vector<std::int32_t> free_;
  bool found_ = false;
  ObjectiveValue best_value_;
  Zoning best_zoning_;
  std::int64_t leaves_ = 0;
};

}  // namespace

std::string_view termination_name(Termination t) {
  switch (t) {
    case Termination::TimeBudget: return "TimeBudget";
    case Termination::LocalOptimum: return "LocalOptimum";
    case Termination::ProvedOptimal: return "ProvedOptimal";
  }
  return "?";
}

Termination termination_from_name(std::string_view name) {
  for (auto t : {Termination::TimeBudget, Termination::LocalOptimum, Termination::ProvedOptimal}) {
    if (termination_name(t) == name) return t;
  }
  throw InputError("unknown termination '" + std::string(name) + "'");
}

SolveResult solve(const Instance& instance, const ConstraintConfig& config, const TravelTimeProvider& travel,
                  const SolveOptions& options) {
  const auto errors = config_errors(config);
  if (!errors.empty()) throw InputError("invalid config: " + errors.front());
  Driver driver(instance, config, travel, options);
  return driver.run();
}

SolveResult solve(const District& district, const ConstraintConfig& config, const TravelTimeProvider& travel,
                  const SolveOptions& options) {
  const auto instance = Instance::compile(district);
  return solve(instance, config, travel, options);
}

SolveResult brute_force(const Instance& instance, const ConstraintConfig& config, const TravelTimeProvider& travel,
                        const BruteForceLimits& limits) {
  const auto errors = config_errors(config);
  if (!errors.empty()) throw InputError("invalid config: " + errors.front());
  FeasibilityModel model(instance, config, travel);
  ObjectiveTracker tracker(instance, config.objective_mode);
  Enumerator e(model, tracker);
  if (e.free_count() > limits.max_free_blocks || instance.school_count() > limits.max_schools) {
    throw DomainError("instance too large for exhaustive search: " + std::to_string(e.free_count()) +
                      " movable blocks, " + std::to_string(instance.school_count()) + " schools");
  }
  e.run();
  // The baseline is feasible, so at least one leaf qualifies.
  if (!e.found()) throw std::logic_error("exhaustive search found no feasible plan");

  SolveResult r;
  r.mode = config.objective_mode;
  r.seed = config.seed;
  tracker.reset(instance.baseline());
  r.baseline_objective = tracker.reported();
  tracker.reset(e.best());
  r.best_objective = tracker.reported();
  r.best_zoning = e.best();
  r.best_plan = instance.plan_from_zoning(e.best());
  r.termination = Termination::ProvedOptimal;
  r.evaluations = e.leaves();
  r.plans_enumerated = e.leaves();
  r.trace.push_back({0.0, 0, r.baseline_objective});
  if (r.best_objective < r.baseline_objective) {
    r.trace.push_back({static_cast<double>(e.leaves()) / kEvaluationsPerSecond, e.leaves(), r.best_objective});
  }
  return r;
}

nlohmann::json to_json(const SolveResult& r) {
  nlohmann::json trace = nlohmann::json::array();
  for (const auto& t : r.trace) {
    trace.push_back({{"elapsed_seconds", t.elapsed_seconds}, {"evaluations", t.evaluations}, {"objective", t.objective}});
  }
  return {{"objective_mode", objective_name(r.mode)},
          {"best_objective", r.best_objective},
          {"baseline_objective", r.baseline_objective},
          {"termination", termination_name(r.termination)},
          {"seed", r.seed},
          {"evaluations", r.evaluations},
          {"plans_enumerated", r.plans_enumerated},
          {"trace", trace},
          {"best_plan", plan_to_json(r.best_plan)}};
}

SolveResult solve_result_from_json(const nlohmann::json& j) {
  try {
    SolveResult r;
    const auto mode = parse_objective(j.at("objective_mode").get<std::string>());
    if (!mode) throw InputError("unknown objective_mode");
    r.mode = *mode;
    r.best_objective = j.at("best_objective").get<double>();
    r.baseline_objective = j.at("baseline_objective").get<double>();
    r.termination = termination_from_name(j.at("termination").get<std::string>());
    r.seed = j.at("seed").get<std::uint64_t>();
    r.evaluations = j.at("evaluations").get<std::int64_t>();
    r.plans_enumerated = j.value("plans_enumerated", std::int64_t{0});
    for (const auto& t : j.at("trace")) {
      r.trace.push_back({t.at("elapsed_seconds").get<double>(), t.at("evaluations").get<std::int64_t>(),
                         t.at("objective").get<double>()});
    }
    r.best_plan = plan_from_json(j.at("best_plan"));
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed solve result: ") + e.what());
  }
}

std::string trace_csv(const std::vector<TracePoint>& trace) {
  std::ostringstream out;
  out.precision(17);
  out << "elapsed_seconds,evaluations,objective\n";
  for (const auto& t : trace) out << t.elapsed_seconds << ',' << t.evaluations << ',' << t.objective << '\n';
  return out.str();
}

}  // namespace rezoner
