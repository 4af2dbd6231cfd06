#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rezoner/instance.hpp"
#include "rezoner/model.hpp"

namespace rezoner {

/// Nonnegative rational; always reduced, den > 0.
struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Fraction reduced(std::int64_t num, std::int64_t den);
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Fraction&, const Fraction&) = default;
};

struct SegregationScore {
  double value = 0.0;
  ObjectiveMode mode = ObjectiveMode::Dissimilarity;
  /// Present for dissimilarity and max-term scores.
  std::optional<Fraction> exact;
};

/// Sum over schools of |W_s * NW_T - NW_s * W_T|, where W is the focal group
/// and NW its complement. Dissimilarity is this over 2 * W_T * NW_T; every
/// term shares the denominator W_T * NW_T.
std::int64_t dissimilarity_numerator(std::span<const GroupCounts> schools, Group focal);
std::int64_t imbalance_term(const GroupCounts& school, std::int64_t focal_total, std::int64_t complement_total,
                            Group focal);

/// Throws UndefinedIndexError when the focal group or its complement is empty.
SegregationScore dissimilarity(std::span<const GroupCounts> schools, Group focal);
SegregationScore dissimilarity(const Instance& instance, const Zoning& zoning, Group focal = Group::White);
SegregationScore dissimilarity(const District& district, const AssignmentPlan& plan, Group focal = Group::White);

/// Sum over schools of (W_s / W_T) * (NW_s / n_s); empty schools add 0.
/// Higher means more exposure of the focal group to everyone else.
SegregationScore interaction_exposure(std::span<const GroupCounts> schools, Group focal);
SegregationScore interaction_exposure(const Instance& instance, const Zoning& zoning, Group focal = Group::White);
SegregationScore interaction_exposure(const District& district, const AssignmentPlan& plan,
                                      Group focal = Group::White);

struct MaxTerm {
  std::size_t school_index = 0;
  SchoolId school_id;
  double value = 0.0;
  Fraction exact;
};

/// Largest |W_s/W_T - NW_s/NW_T|; ties go to the smallest school id.
MaxTerm max_term(const Instance& instance, const Zoning& zoning, Group focal = Group::White);
MaxTerm max_term(const District& district, const AssignmentPlan& plan, Group focal = Group::White);

}  // namespace rezoner
