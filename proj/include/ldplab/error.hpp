#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ldplab {

enum class ErrorKind {
  SingularMatrix,
  NonFinite,
  EigenFailure,
  BadIndex,
  DimensionMismatch,
  BadParameters,
  NotProximal,
  SingularProduct,
  BudgetExceeded,
  EmptySet,
  ParseError,
  ValidationError,
  IoError,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::SingularMatrix: return "SingularMatrix";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::EigenFailure: return "EigenFailure";
    case ErrorKind::BadIndex: return "BadIndex";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::BadParameters: return "BadParameters";
    case ErrorKind::NotProximal: return "NotProximal";
    case ErrorKind::SingularProduct: return "SingularProduct";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::EmptySet: return "EmptySet";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the kinds above so
/// callers (and the CLI's error JSON) can dispatch without parsing text.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised when a word enumeration would exceed its budget; `required` is the
/// smallest budget that would have been accepted.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(double required, double budget)
      : Error(ErrorKind::BudgetExceeded,
              "enumeration needs " + std::to_string(required) + " words, budget is " +
                  std::to_string(budget)),
        required_(required) {}

  double required() const noexcept { return required_; }

 private:
  double required_;
};

}  // namespace ldplab
