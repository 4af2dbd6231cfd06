#pragma once

#include <stdexcept>
#include <string>

namespace rezoner {

/// Malformed or unreadable input (files, JSON, CSV, flags). CLI exit code 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A domain contract was violated. CLI exit code 1.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dissimilarity/exposure requested for a focal group (or complement) with no
/// students.
class UndefinedIndexError : public DomainError {
 public:
  using DomainError::DomainError;
};

class TravelLookupError : public DomainError {
 public:
  TravelLookupError(std::string block_id, std::string school_id)
      : DomainError("no travel time for block '" + block_id + "' to school '" + school_id + "'"),
        block_id_(std::move(block_id)),
        school_id_(std::move(school_id)) {}

  const std::string& block_id() const { return block_id_; }
  const std::string& school_id() const { return school_id_; }

 private:
  std::string block_id_;
  std::string school_id_;
};

class UnallocatableError : public DomainError {
 public:
  UnallocatableError(std::string school_id, std::string group)
      : DomainError("school '" + school_id + "' enrolls " + group +
                    " students but its zone has no census children"),
        school_id_(std::move(school_id)),
        group_(std::move(group)) {}

  const std::string& school_id() const { return school_id_; }
  const std::string& group() const { return group_; }

 private:
  std::string school_id_;
  std::string group_;
};

class GeometryError : public InputError {
 public:
  GeometryError(std::string subject, const std::string& what)
      : InputError("invalid geometry for '" + subject + "': " + what), subject_(std::move(subject)) {}

  const std::string& subject() const { return subject_; }

 private:
  std::string subject_;
};

}  // namespace rezoner
