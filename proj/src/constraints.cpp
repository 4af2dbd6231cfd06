#include "rezoner/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rezoner/errors.hpp"
#include "rezoner/validate.hpp"

namespace rezoner {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool within(double value, double limit) { return value <= limit + 1e-9 * std::max(1.0, std::abs(limit)); }

std::string fmt(double v) {
  std::ostringstream ss;
  ss << v;
  return ss.str();
}

}  // namespace

std::string_view kind_name(FeasibilityViolation::Kind k) {
  switch (k) {
    case FeasibilityViolation::Kind::TravelCap: return "TravelCap";
    case FeasibilityViolation::Kind::SizeCap: return "SizeCap";
    case FeasibilityViolation::Kind::Contiguity: return "Contiguity";
    case FeasibilityViolation::Kind::AnchorMoved: return "AnchorMoved";
  }
  return "?";
}

ZoneReach::ZoneReach(const Instance& instance)
    : instance_(&instance), stamp_(instance.block_count(), 0) {
  queue_.reserve(instance.block_count());
}

std::size_t ZoneReach::run(const Zoning& zoning, std::int32_t school, std::int32_t excluded) {
  if (++epoch_ == 0) {
    std::fill(stamp_.begin(), stamp_.end(), 0);
    epoch_ = 1;
  }
  queue_.clear();
  const auto root = instance_->anchor_block(school);
  if (root == excluded || zoning[root] != school) return 0;
  stamp_[root] = epoch_;
  queue_.push_back(root);
  for (std::size_t head = 0; head < queue_.size(); ++head) {
    for (auto n : instance_->neighbors(queue_[head])) {
      if (stamp_[n] == epoch_ || n == excluded || zoning[n] != school) continue;
      stamp_[n] = epoch_;
      queue_.push_back(n);
    }
  }
  return queue_.size();
}

std::vector<std::uint8_t> contiguity_mask(const Instance& instance, const Zoning& zoning) {
  std::vector<std::uint8_t> mask(instance.block_count(), 0);
  ZoneReach reach(instance);
  for (std::size_t s = 0; s < instance.school_count(); ++s) {
    reach.run(zoning, static_cast<std::int32_t>(s));
    for (auto b : reach.visited()) mask[b] = 1;
  }
  return mask;
}

std::set<BlockId> contiguous_blocks(const District& district, const AssignmentPlan& plan) {
  const auto inst = Instance::compile(district);
  const auto mask = contiguity_mask(inst, inst.zoning_from_plan(plan));
  std::set<BlockId> out;
  for (std::size_t b = 0; b < inst.block_count(); ++b) {
    if (mask[b]) out.insert(inst.block_id(b));
  }
  return out;
}

FeasibilityModel::FeasibilityModel(const Instance& instance, const ConstraintConfig& config,
                                   const TravelTimeProvider& travel)
    : instance_(&instance), config_(config), school_count_(instance.school_count()) {
  const auto nb = instance.block_count();
  const auto ns = school_count_;
  const auto& base = instance.baseline();

  travel_.assign(nb * ns, kNaN);
  for (std::size_t b = 0; b < nb; ++b) {
    for (std::size_t s = 0; s < ns; ++s) {
      try {
        travel_[b * ns + s] = travel.seconds(instance.block_id(b), instance.block_centroid(b), instance.school_id(s),
                                             instance.school_location(s));
      } catch (const TravelLookupError&) {
        // Left unavailable.
      }
    }
  }

  travel_limit_.assign(nb, std::numeric_limits<double>::infinity());
  allowed_.assign(nb * ns, 0);
  for (std::size_t b = 0; b < nb; ++b) {
    if (instance.student_total(b) > 0) {
      const double t0 = travel_[b * ns + base[b]];
      travel_limit_[b] =
          std::isnan(t0) ? kNaN : (1.0 + config.max_travel_increase_fraction) * (t0 > 0.0 ? t0 : kTravelFloorSeconds);
    }
    for (std::size_t s = 0; s < ns; ++s) {
      const double t = travel_[b * ns + s];
      const bool ok = static_cast<std::int32_t>(s) == base[b] || instance.student_total(b) == 0 ||
                      (!std::isnan(t) && !std::isnan(travel_limit_[b]) && within(t, travel_limit_[b]));
      allowed_[b * ns + s] = ok ? 1 : 0;
    }
  }

  const auto sizes = instance.school_counts(base);
  for (std::size_t s = 0; s < ns; ++s) {
    const auto n = sizes[s].total();
    baseline_size_.push_back(n);
    const double cap = (1.0 + config.max_size_increase_fraction) * static_cast<double>(n);
    size_cap_.push_back(static_cast<std::int64_t>(std::floor(cap + 1e-9 * std::max(1.0, cap))));
  }

  constrained_.assign(nb, 0);
  if (config.enforce_contiguity) constrained_ = contiguity_mask(instance, base);
}

bool FeasibilityModel::travel_available(std::size_t b, std::size_t s) const {
  return !std::isnan(travel_[b * school_count_ + s]);
}

double FeasibilityModel::travel_seconds(std::size_t b, std::size_t s) const {
  const double t = travel_[b * school_count_ + s];
  if (std::isnan(t)) throw TravelLookupError(instance_->block_id(b), instance_->school_id(s));
  return t;
}

std::vector<FeasibilityViolation> check_feasibility(const FeasibilityModel& model, const Zoning& zoning) {
  using Kind = FeasibilityViolation::Kind;
  const auto& inst = model.instance();
  const auto& base = inst.baseline();
  std::vector<FeasibilityViolation> out;

  for (std::size_t b = 0; b < inst.block_count(); ++b) {
    if (zoning[b] == base[b] || inst.student_total(b) == 0) continue;
    const double t0 = model.travel_seconds(b, base[b]);
    const double t = model.travel_seconds(b, zoning[b]);
    const double limit = model.travel_limit(b);
    if (!within(t, limit)) {
      out.push_back({Kind::TravelCap, inst.block_id(b), t, limit,
                     "travel to '" + inst.school_id(zoning[b]) + "' is " + fmt(t) + " s, limit " + fmt(limit) +
                         " s (baseline " + fmt(t0) + " s)"});
    }
  }

  const auto counts = inst.school_counts(zoning);
  for (std::size_t s = 0; s < inst.school_count(); ++s) {
    const auto n = counts[s].total();
    if (n > model.size_cap(s)) {
      const auto cap = model.size_cap(s);
      out.push_back({Kind::SizeCap, inst.school_id(s), static_cast<double>(n), static_cast<double>(cap),
                     std::to_string(n) + " students, baseline " + std::to_string(model.baseline_size(s)) +
                         ", limit " + std::to_string(cap)});
    }
  }

  if (model.config().enforce_contiguity) {
    const auto mask = contiguity_mask(inst, zoning);
    for (std::size_t b = 0; b < inst.block_count(); ++b) {
      if (model.constrained(b) && !mask[b]) {
        out.push_back({Kind::Contiguity, inst.block_id(b), 0.0, 1.0,
                       "no path to the anchor of '" + inst.school_id(zoning[b]) + "' within its zone"});
      }
    }
  }

  for (std::size_t s = 0; s < inst.school_count(); ++s) {
    const auto a = inst.anchor_block(s);
    if (zoning[a] != static_cast<std::int32_t>(s)) {
      out.push_back({Kind::AnchorMoved, inst.school_id(s), static_cast<double>(zoning[a]), static_cast<double>(s),
                     "containing block '" + inst.block_id(a) + "' reassigned to '" + inst.school_id(zoning[a]) + "'"});
    }
  }
  return out;
}

std::vector<FeasibilityViolation> check_feasibility(const District& district, const AssignmentPlan& plan,
                                                    const ConstraintConfig& config,
                                                    const TravelTimeProvider& travel) {
  const auto inst = Instance::compile(district);
  const FeasibilityModel model(inst, config, travel);
  // Anchor violations are reported as violations, not plan errors.
  Zoning z(inst.block_count(), -1);
  ValidationReport problems;
  for (const auto& [block, school] : plan) {
    const auto b = inst.block_index(block);
    const auto s = inst.school_index(school);
    if (b < 0 || s < 0) {
      problems.push_back({b < 0 ? "unknown_block" : "unknown_school", block, "cannot map '" + block + "' -> '" + school + "'"});
      continue;
    }
    z[b] = s;
  }
  for (std::size_t b = 0; b < inst.block_count(); ++b) {
    if (z[b] < 0) problems.push_back({"unassigned_block", inst.block_id(b), "block missing from plan"});
  }
  if (!problems.empty()) throw InvalidPlanError(std::move(problems));
  return check_feasibility(model, z);
}

std::vector<Move> enumerate_moves(const FeasibilityModel& model, const Zoning& zoning, MoveScope scope) {
  const auto& inst = model.instance();
  const bool contiguity = model.config().enforce_contiguity;
  const auto ns = inst.school_count();

  std::vector<std::int64_t> size(ns, 0);
  std::vector<std::int64_t> constrained_in_zone(ns, 0);
  for (std::size_t b = 0; b < inst.block_count(); ++b) {
    size[zoning[b]] += inst.student_total(b);
    if (model.constrained(b)) ++constrained_in_zone[zoning[b]];
  }
  std::vector<std::uint8_t> reachable;
  if (contiguity) reachable = contiguity_mask(inst, zoning);

  ZoneReach reach(inst);
  std::vector<Move> out;
  std::vector<std::int32_t> targets;
  for (std::size_t bi = 0; bi < inst.block_count(); ++bi) {
    const auto b = static_cast<std::int32_t>(bi);
    if (inst.anchored_school(b) >= 0) continue;
    const auto from = zoning[b];

    targets.clear();
    if (scope == MoveScope::Boundary) {
      for (auto n : inst.neighbors(b)) {
        if (zoning[n] != from) targets.push_back(zoning[n]);
      }
      std::sort(targets.begin(), targets.end());
      targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
    } else {
      for (std::size_t s = 0; s < ns; ++s) {
        if (static_cast<std::int32_t>(s) != from) targets.push_back(static_cast<std::int32_t>(s));
      }
    }
    if (targets.empty()) continue;

    if (contiguity) {
      // Removing b must leave every constrained block of the donor zone
      // connected to the donor anchor.
      reach.run(zoning, from, b);
      std::int64_t kept = 0;
      for (auto v : reach.visited()) kept += model.constrained(v) ? 1 : 0;
      if (kept != constrained_in_zone[from] - (model.constrained(b) ? 1 : 0)) continue;
    }

    for (auto to : targets) {
      if (!model.allowed(b, to)) continue;
      if (size[to] + inst.student_total(b) > model.size_cap(to)) continue;
      if (contiguity) {
        bool joins = false;
        for (auto n : inst.neighbors(b)) {
          if (zoning[n] == to && reachable[n]) {
            joins = true;
            break;
          }
        }
        if (!joins) continue;
      }
      out.push_back({b, from, to});
    }
  }
  return out;
}

nlohmann::json to_json(const std::vector<FeasibilityViolation>& violations) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& v : violations) {
    arr.push_back({{"kind", kind_name(v.kind)},
                   {"subject", v.subject},
                   {"measured", v.measured},
                   {"bound", v.bound},
                   {"detail", v.detail}});
  }
  return arr;
}

}  // namespace rezoner
