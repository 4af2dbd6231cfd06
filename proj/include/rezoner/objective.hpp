#pragma once

#include <cstdint>
#include <vector>

#include "rezoner/instance.hpp"

namespace rezoner {

/// Comparable objective value. Integer modes compare (primary, secondary)
/// exactly; InteractionExposure compares `real`.
struct ObjectiveValue {
  std::int64_t primary = 0;
  std::int64_t secondary = 0;
  double real = 0.0;
};

/// Strictly better (smaller) under `mode`.
bool better(const ObjectiveValue& a, const ObjectiveValue& b, ObjectiveMode mode);

/// Per-school focal/complement counts under a zoning, updated one block at a
/// time. A move touches only the two schools involved, so the dissimilarity
/// numerator changes in O(1).
///
/// Dissimilarity:        primary = sum of imbalance terms (denominator 2*W_T*NW_T)
/// Leximin:              primary = largest term, secondary = sum of terms
/// InteractionExposure:  real = 1 - exposure
class ObjectiveTracker {
 public:
  /// Throws UndefinedIndexError if the focal group or its complement is empty.
  ObjectiveTracker(const Instance& instance, ObjectiveMode mode, Group focal = Group::White);

  void reset(const Zoning& zoning);
  void move(std::int32_t block, std::int32_t from, std::int32_t to);

  ObjectiveValue value() const;
  /// Scalar used for annealing acceptance; smaller is better.
  double energy() const;
  /// The objective as reported to users (dissimilarity, max term, or 1 - exposure).
  double reported() const;

  std::int64_t dissimilarity_numerator() const { return term_sum_; }
  std::int64_t max_term_numerator() const;
  /// Denominator shared by every imbalance term: W_T * NW_T.
  std::int64_t term_denominator() const { return focal_total_ * complement_total_; }
  ObjectiveMode mode() const { return mode_; }

 private:
  std::int64_t term(std::size_t s) const;
  double exposure_term(std::size_t s) const;
  double exposure() const;

  const Instance* instance_;
  ObjectiveMode mode_;
  Group group_;
  std::int64_t focal_total_ = 0;
  std::int64_t complement_total_ = 0;
  std::vector<std::int64_t> focal_;
  std::vector<std::int64_t> complement_;
  std::vector<std::int64_t> terms_;
  std::int64_t term_sum_ = 0;
};

}  // namespace rezoner
