#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lfd {

/// Classification carried by every library error. The CLI prints it verbatim.
enum class ErrorKind {
  invalid_argument,
  parse,
  domain,
  singularity,
  boundary_required,
  invalid_kernel,
  pole,
  overflow,
  accuracy,
  budget,
  no_limit,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Malformed expression text. `position` is a 1-based column; input length + 1 means end of input.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position, std::string expected)
      : Error(ErrorKind::parse, message), position_(position), expected_(std::move(expected)) {}

  std::size_t position() const noexcept { return position_; }
  const std::string& expected() const noexcept { return expected_; }

 private:
  std::size_t position_;
  std::string expected_;
};

/// Evaluation left the natural domain of a subexpression (ln of a non-positive value, 0^-1, ...).
class DomainError : public Error {
 public:
  DomainError(const std::string& message, std::size_t position)
      : Error(ErrorKind::domain, message), position_(position) {}

  /// Source column of the offending subexpression, 0 when it was synthesized (e.g. by differentiation).
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Quadrature that failed to reach its tolerance. Carries the best estimate it had.
class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& message, double estimate, double error_bound)
      : Error(ErrorKind::accuracy, message), estimate_(estimate), error_bound_(error_bound) {}

  double estimate() const noexcept { return estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  double estimate_;
  double error_bound_;
};

}  // namespace lfd
