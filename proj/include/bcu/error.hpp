#pragma once

#include <stdexcept>
#include <string>

namespace bcu {

// Bad user-supplied parameters (degree out of range, family parameters, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Operands from two different fields were combined.
class FieldMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input data violates a structural contract (PDA conditions, file syntax, ...).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The requested field cannot support a construction (e.g. q < F for MDS).
class FieldTooSmall : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A randomized construction kept failing validation.
class RetryExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An enumeration would exceed its configured work budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DecodeError : public std::runtime_error {
 public:
  enum class Kind {
    kNoConsistentSupport,  // no support of weight <= epsilon explains the syndrome
    kAmbiguous,            // two supports explain it with different corrections
  };

  DecodeError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

}  // namespace bcu
