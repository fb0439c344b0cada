#pragma once

#include <stdexcept>
#include <string>

namespace nodal {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Valid arguments for which a construction is not defined (e.g. a smoothing
// radius that would exceed half the torus period).
class RangeError : public std::range_error {
 public:
  using std::range_error::range_error;
};

// A numerical procedure failed to meet its requested tolerance. The best
// estimate found is kept so callers can still report it.
class AccuracyError : public std::runtime_error {
 public:
  AccuracyError(const std::string& what, double estimate, double error_estimate)
      : std::runtime_error(what), estimate_(estimate), error_(error_estimate) {}

  double estimate() const noexcept { return estimate_; }
  double error_estimate() const noexcept { return error_; }

 private:
  double estimate_;
  double error_;
};

// A constructive step (root bracketing, kernel design) did not succeed.
class ConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input document. `field` names the offending JSON path.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(field) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace nodal
