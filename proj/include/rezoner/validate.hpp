#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rezoner/errors.hpp"
#include "rezoner/model.hpp"

namespace rezoner {

/// One broken invariant. `code` is a stable snake_case identifier such as
/// "unknown_school" or "enrollment_mismatch".
struct Violation {
  std::string code;
  std::string subject;
  std::string message;
  friend bool operator==(const Violation&, const Violation&) = default;
};

using ValidationReport = std::vector<Violation>;

/// Every invariant violation of the district, baseline plan and student
/// counts. Empty means valid.
ValidationReport validate_district(const District& district);

/// Checks a candidate plan against a district: totality, referential
/// integrity and the anchor rule.
ValidationReport validate_plan(const District& district, const AssignmentPlan& plan);

nlohmann::json to_json(const ValidationReport& report);

class InvalidDistrictError : public DomainError {
 public:
  explicit InvalidDistrictError(ValidationReport report);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

class InvalidPlanError : public DomainError {
 public:
  explicit InvalidPlanError(ValidationReport report);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

}  // namespace rezoner
