#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace crjet {

// Exit codes shared between the library error hierarchy and the CLI driver.
enum class ExitCode : int {
  ok = 0,
  parse_error = 2,
  validation_error = 3,
  convergence_error = 4,
  internal_error = 5,
};

class Error : public std::runtime_error {
 public:
  Error(ExitCode code, std::string kind, const std::string& what)
      : std::runtime_error(what), code_(code), kind_(std::move(kind)) {}

  ExitCode exit_code() const noexcept { return code_; }
  const std::string& kind() const noexcept { return kind_; }

 private:
  ExitCode code_;
  std::string kind_;
};

// Malformed input text: surface files, defining expressions, point tuples.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what, int line = 0, int column = 0)
      : Error(ExitCode::parse_error, "parse", what), line_(line), column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

// Input that parses but violates a mathematical precondition.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what, std::string kind = "validation")
      : Error(ExitCode::validation_error, std::move(kind), what) {}
};

// The defining series is not a real function of (Z, conj Z).
class RealityError : public ValidationError {
 public:
  explicit RealityError(const std::string& what) : ValidationError(what, "reality") {}
};

// A point that was required to lie on the hypersurface does not.
class DomainError : public ValidationError {
 public:
  explicit DomainError(const std::string& what) : ValidationError(what, "domain") {}
};

// The chart assumptions fail (typically a vanishing w-derivative); the caller
// must rotate coordinates before retrying.
class BadCoordinatesError : public ValidationError {
 public:
  explicit BadCoordinatesError(const std::string& what)
      : ValidationError(what, "bad-coordinates") {}
};

class NotStrictlyPseudoconvexError : public ValidationError {
 public:
  explicit NotStrictlyPseudoconvexError(const std::string& what)
      : ValidationError(what, "not-strictly-pseudoconvex") {}
};

// A jet or derivative order that the truncation order cannot support.
class TruncationError : public ValidationError {
 public:
  explicit TruncationError(const std::string& what) : ValidationError(what, "truncation") {}
};

// Misuse of a library contract (ring mismatch, illegal substitution, ...).
// These indicate a bug in the caller rather than bad user data.
class ContractError : public Error {
 public:
  explicit ContractError(const std::string& what)
      : Error(ExitCode::internal_error, "contract", what) {}
};

// An iterative numeric solve failed to reach the requested tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(ExitCode::convergence_error, "convergence", what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

// A Newton step hit a singular linearization.
class DegenerateConfigurationError : public Error {
 public:
  explicit DegenerateConfigurationError(const std::string& what)
      : Error(ExitCode::convergence_error, "degenerate-configuration", what) {}
};

}  // namespace crjet
