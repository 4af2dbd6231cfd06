#include "rezoner/metrics.hpp"

#include <cstdlib>
#include <numeric>

#include "rezoner/errors.hpp"

namespace rezoner {

namespace {

struct Totals {
  std::int64_t focal = 0;
  std::int64_t complement = 0;
};

Totals totals_of(std::span<const GroupCounts> schools, Group focal) {
  Totals t;
  for (const auto& s : schools) {
    t.focal += s.focal(focal);
    t.complement += s.complement(focal);
  }
  if (t.focal <= 0) {
    throw UndefinedIndexError("segregation index undefined: no " + std::string(group_name(focal)) + " students");
  }
  if (t.complement <= 0) {
    throw UndefinedIndexError("segregation index undefined: every student is " + std::string(group_name(focal)));
  }
  return t;
}

}  // namespace

Fraction Fraction::reduced(std::int64_t num, std::int64_t den) {
  const auto g = std::gcd(num, den);
  if (g == 0) return {0, 1};
  return {num / g, den / g};
}

std::int64_t imbalance_term(const GroupCounts& school, std::int64_t focal_total, std::int64_t complement_total,
                            Group focal) {
  return std::llabs(school.focal(focal) * complement_total - school.complement(focal) * focal_total);
}

std::int64_t dissimilarity_numerator(std::span<const GroupCounts> schools, Group focal) {
  const auto t = totals_of(schools, focal);
  std::int64_t sum = 0;
  for (const auto& s : schools) sum += imbalance_term(s, t.focal, t.complement, focal);
  return sum;
}

SegregationScore dissimilarity(std::span<const GroupCounts> schools, Group focal) {
  const auto t = totals_of(schools, focal);
  const auto exact = Fraction::reduced(dissimilarity_numerator(schools, focal), 2 * t.focal * t.complement);
  return {exact.value(), ObjectiveMode::Dissimilarity, exact};
}

SegregationScore dissimilarity(const Instance& instance, const Zoning& zoning, Group focal) {
  const auto counts = instance.school_counts(zoning);
  return dissimilarity(counts, focal);
}

SegregationScore dissimilarity(const District& district, const AssignmentPlan& plan, Group focal) {
  const auto inst = Instance::compile(district);
  return dissimilarity(inst, inst.zoning_from_plan(plan), focal);
}

SegregationScore interaction_exposure(std::span<const GroupCounts> schools, Group focal) {
  const auto t = totals_of(schools, focal);
  double sum = 0.0;
  for (const auto& s : schools) {
    const auto n = s.total();
    if (n == 0) continue;
    sum += static_cast<double>(s.focal(focal)) * static_cast<double>(s.complement(focal)) / static_cast<double>(n);
  }
  return {sum / static_cast<double>(t.focal), ObjectiveMode::InteractionExposure, std::nullopt};
}

SegregationScore interaction_exposure(const Instance& instance, const Zoning& zoning, Group focal) {
  const auto counts = instance.school_counts(zoning);
  return interaction_exposure(counts, focal);
}

SegregationScore interaction_exposure(const District& district, const AssignmentPlan& plan, Group focal) {
  const auto inst = Instance::compile(district);
  return interaction_exposure(inst, inst.zoning_from_plan(plan), focal);
}

MaxTerm max_term(const Instance& instance, const Zoning& zoning, Group focal) {
  const auto counts = instance.school_counts(zoning);
  const auto t = totals_of(counts, focal);
  MaxTerm best;
  std::int64_t best_num = -1;
  // Schools are in id order, so strict improvement keeps the smallest id.
  for (std::size_t s = 0; s < counts.size(); ++s) {
    const auto term = imbalance_term(counts[s], t.focal, t.complement, focal);
    if (term > best_num) {
      best_num = term;
      best.school_index = s;
    }
  }
  best.school_id = instance.school_id(best.school_index);
  best.exact = Fraction::reduced(best_num, t.focal * t.complement);
  best.value = best.exact.value();
  return best;
}

MaxTerm max_term(const District& district, const AssignmentPlan& plan, Group focal) {
  const auto inst = Instance::compile(district);
  return max_term(inst, inst.zoning_from_plan(plan), focal);
}

}  // namespace rezoner
