#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rezoner/instance.hpp"
#include "rezoner/travel.hpp"

namespace rezoner {

/// A baseline travel time of zero is replaced by this many seconds before
/// the travel cap is applied.
inline constexpr double kTravelFloorSeconds = 60.0;

struct FeasibilityViolation {
  enum class Kind { TravelCap, SizeCap, Contiguity, AnchorMoved };
  Kind kind;
  std::string subject;  // block id (TravelCap, Contiguity) or school id
  double measured = 0.0;
  double bound = 0.0;
  std::string detail;
};

std::string_view kind_name(FeasibilityViolation::Kind k);

/// Single-block reassignment.
struct Move {
  std::int32_t block = -1;
  std::int32_t from = -1;
  std::int32_t to = -1;
  friend bool operator==(const Move&, const Move&) = default;
  friend auto operator<=>(const Move&, const Move&) = default;
};

/// Breadth-first reachability inside one zone, reusing its buffers.
class ZoneReach {
 public:
  explicit ZoneReach(const Instance& instance);

  /// Marks blocks reachable from school s's anchor through blocks zoned to s,
  /// never entering `excluded`. Returns the number of blocks reached.
  std::size_t run(const Zoning& zoning, std::int32_t school, std::int32_t excluded = -1);
  bool reached(std::int32_t block) const { return stamp_[block] == epoch_; }
  /// Blocks reached by the last run().
  const std::vector<std::int32_t>& visited() const { return queue_; }

 private:
  const Instance* instance_;
  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 0;
  std::vector<std::int32_t> queue_;
};

/// Mask of blocks contiguous with their assigned school: connected to the
/// school's anchor block through blocks assigned to the same school.
std::vector<std::uint8_t> contiguity_mask(const Instance& instance, const Zoning& zoning);
std::set<BlockId> contiguous_blocks(const District& district, const AssignmentPlan& plan);

/// Everything needed to judge plans for one (instance, config, travel)
/// triple. Holds a reference to the instance, which must outlive it.
class FeasibilityModel {
 public:
  /// Travel pairs the provider cannot answer are recorded as unavailable;
  /// they only raise errors when a check needs them.
  FeasibilityModel(const Instance& instance, const ConstraintConfig& config, const TravelTimeProvider& travel);

  const Instance& instance() const { return *instance_; }
  const ConstraintConfig& config() const { return config_; }

  bool travel_available(std::size_t b, std::size_t s) const;
  /// Throws TravelLookupError when unavailable.
  double travel_seconds(std::size_t b, std::size_t s) const;
  /// Largest permitted travel for block b; +inf when the block has no students.
  double travel_limit(std::size_t b) const { return travel_limit_[b]; }
  /// Static part of feasibility: block b may be zoned to s under the travel
  /// cap (always true for its baseline school and for empty blocks).
  bool allowed(std::size_t b, std::size_t s) const { return allowed_[b * school_count_ + s] != 0; }

  std::int64_t baseline_size(std::size_t s) const { return baseline_size_[s]; }
  std::int64_t size_cap(std::size_t s) const { return size_cap_[s]; }

  /// Contiguous at baseline, hence required to stay contiguous. All zero
  /// when contiguity is not enforced.
  bool constrained(std::size_t b) const { return constrained_[b] != 0; }

 private:
  const Instance* instance_;
  ConstraintConfig config_;
  std::size_t school_count_ = 0;
  std::vector<double> travel_;  // NaN = unavailable
  std::vector<double> travel_limit_;
  std::vector<std::uint8_t> allowed_;
  std::vector<std::int64_t> baseline_size_;
  std::vector<std::int64_t> size_cap_;
  std::vector<std::uint8_t> constrained_;
};

/// Empty iff the zoning is feasible. Throws TravelLookupError when a travel
/// time needed for the verdict is unavailable.
std::vector<FeasibilityViolation> check_feasibility(const FeasibilityModel& model, const Zoning& zoning);
std::vector<FeasibilityViolation> check_feasibility(const District& district, const AssignmentPlan& plan,
                                                    const ConstraintConfig& config,
                                                    const TravelTimeProvider& travel);

enum class MoveScope {
  /// Only schools whose zone touches the block.
  Boundary,
  /// Any other school; the neighborhood used when contiguity is off.
  AnySchool,
};

/// Every single-block move that keeps a feasible zoning feasible, in
/// (block, target) order. Anchors never move. With contiguity enforced the
/// moved block must also end up contiguous with its new school.
std::vector<Move> enumerate_moves(const FeasibilityModel& model, const Zoning& zoning,
                                  MoveScope scope = MoveScope::Boundary);

nlohmann::json to_json(const std::vector<FeasibilityViolation>& violations);

}  // namespace rezoner
