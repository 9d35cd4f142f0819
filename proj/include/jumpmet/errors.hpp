#ifndef JUMPMET_ERRORS_HPP
#define JUMPMET_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace jumpmet {

// Bad inputs: out-of-range parameters, malformed models, dimension
// mismatches. Maps to CLI exit code 1.
class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// A Kraus set whose operators do not sum to the identity. Carries the
// measured defect so callers can report it.
class CompletenessError : public ValidationError {
public:
  CompletenessError(const std::string& msg, double defect)
      : ValidationError(msg), defect_(defect) {}
  double defect() const { return defect_; }

private:
  double defect_;
};

// Mathematical domain violations (phi grid leaving (0, pi), nonpositive
// Fisher information, vanishing signal derivative).
class DomainError : public std::runtime_error {
public:
  explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

// Request exceeds an enumeration cap. Maps to CLI exit code 2.
class CapacityError : public std::runtime_error {
public:
  explicit CapacityError(const std::string& msg) : std::runtime_error(msg) {}
};

// Photon-number truncation lost too much probability mass. Exit code 2.
class TruncationError : public std::runtime_error {
public:
  TruncationError(const std::string& msg, double lost_mass)
      : std::runtime_error(msg), lost_mass_(lost_mass) {}
  double lost_mass() const { return lost_mass_; }

private:
  double lost_mass_;
};

}  // namespace jumpmet

#endif
