#pragma once

#include <stdexcept>
#include <string>

namespace dust {

/// Input violates a documented precondition (bad shape, out-of-range value,
/// disconnected graph where connectivity is required, ...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation ran past an explicit budget (step cap, block budget,
/// iteration limit). Never raised for ordinary statistical failure.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A linear system or probability normalisation was singular.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {
inline void require(bool condition, const std::string& message) {
  if (!condition) throw ValidationError(message);
}
}  // namespace detail

}  // namespace dust
