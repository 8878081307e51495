#pragma once

#include <stdexcept>
#include <string>

namespace chaincap {

// Base for every error the library raises. The CLI maps subclasses onto exit
// codes: input-side problems exit 2, runtime/calibration failures exit 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numeric argument outside its mathematical domain (negative rate, NaN...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Malformed configuration document. Carries the 1-based line and the field.
class ParseError : public Error {
 public:
  ParseError(int line, std::string field, const std::string& what)
      : Error("line " + std::to_string(line) + ", field '" + field + "': " + what),
        line_(line),
        field_(std::move(field)) {}

  int line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  int line_;
  std::string field_;
};

class ConflictError : public Error {
 public:
  using Error::Error;
};

// Cluster or campaign configuration that breaks an invariant.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Caller broke an operation precondition (e.g. unsorted event stream).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

class InputError : public Error {
 public:
  using Error::Error;
};

class CalibrationError : public Error {
 public:
  using Error::Error;
};

class CampaignError : public Error {
 public:
  using Error::Error;
};

}  // namespace chaincap
