#include "rezoner/objective.hpp"

#include <algorithm>
#include <cstdlib>

#include "rezoner/errors.hpp"

namespace rezoner {

namespace {

// Weight of total imbalance in the leximin annealing energy; the largest
// term dominates.
constexpr double kLeximinTiebreakWeight = 0.1;

}  // namespace

bool better(const ObjectiveValue& a, const ObjectiveValue& b, ObjectiveMode mode) {
  if (mode == ObjectiveMode::InteractionExposure) return a.real < b.real;
  if (a.primary != b.primary) return a.primary < b.primary;
  return a.secondary < b.secondary;
}

ObjectiveTracker::ObjectiveTracker(const Instance& instance, ObjectiveMode mode, Group focal)
    : instance_(&instance), mode_(mode), group_(focal) {
  const auto& totals = instance.district_totals();
  focal_total_ = totals.focal(focal);
  complement_total_ = totals.complement(focal);
  if (focal_total_ <= 0 || complement_total_ <= 0) {
    throw UndefinedIndexError("objective undefined: district needs both " + std::string(group_name(focal)) +
                              " and other students");
  }
  reset(instance.baseline());
}

void ObjectiveTracker::reset(const Zoning& zoning) {
  const auto ns = instance_->school_count();
  focal_.assign(ns, 0);
  complement_.assign(ns, 0);
  for (std::size_t b = 0; b < zoning.size(); ++b) {
    const auto& c = instance_->students(b);
    focal_[zoning[b]] += c.focal(group_);
    complement_[zoning[b]] += c.complement(group_);
  }
  terms_.assign(ns, 0);
  term_sum_ = 0;
  for (std::size_t s = 0; s < ns; ++s) {
    terms_[s] = term(s);
    term_sum_ += terms_[s];
  }
}

std::int64_t ObjectiveTracker::term(std::size_t s) const {
  return std::llabs(focal_[s] * complement_total_ - complement_[s] * focal_total_);
}

void ObjectiveTracker::move(std::int32_t block, std::int32_t from, std::int32_t to) {
  if (from == to) return;
  const auto& c = instance_->students(block);
  const auto f = c.focal(group_);
  const auto nf = c.complement(group_);
  focal_[from] -= f;
  complement_[from] -= nf;
  focal_[to] += f;
  complement_[to] += nf;
  for (auto s : {from, to}) {
    const auto t = term(s);
    term_sum_ += t - terms_[s];
    terms_[s] = t;
  }
}

std::int64_t ObjectiveTracker::max_term_numerator() const { return *std::max_element(terms_.begin(), terms_.end()); }

double ObjectiveTracker::exposure_term(std::size_t s) const {
  const auto n = focal_[s] + complement_[s];
  if (n == 0) return 0.0;
  return static_cast<double>(focal_[s]) * static_cast<double>(complement_[s]) / static_cast<double>(n);
}

double ObjectiveTracker::exposure() const {
  double sum = 0.0;
  for (std::size_t s = 0; s < terms_.size(); ++s) sum += exposure_term(s);
  return sum / static_cast<double>(focal_total_);
}

ObjectiveValue ObjectiveTracker::value() const {
  switch (mode_) {
    case ObjectiveMode::Dissimilarity: return {term_sum_, 0, reported()};
    case ObjectiveMode::Leximin: return {max_term_numerator(), term_sum_, reported()};
    case ObjectiveMode::InteractionExposure: return {0, 0, 1.0 - exposure()};
  }
  return {};
}

double ObjectiveTracker::energy() const {
  const double denom = static_cast<double>(term_denominator());
  switch (mode_) {
    case ObjectiveMode::Dissimilarity: return static_cast<double>(term_sum_) / (2.0 * denom);
    case ObjectiveMode::Leximin:
      return static_cast<double>(max_term_numerator()) / denom +
             kLeximinTiebreakWeight * static_cast<double>(term_sum_) / (2.0 * denom);
    case ObjectiveMode::InteractionExposure: return 1.0 - exposure();
  }
  return 0.0;
}

double ObjectiveTracker::reported() const {
  const double denom = static_cast<double>(term_denominator());
  switch (mode_) {
    case ObjectiveMode::Dissimilarity: return static_cast<double>(term_sum_) / (2.0 * denom);
    case ObjectiveMode::Leximin: return static_cast<double>(max_term_numerator()) / denom;
    case ObjectiveMode::InteractionExposure: return 1.0 - exposure();
  }
  return 0.0;
}

}  // namespace rezoner
