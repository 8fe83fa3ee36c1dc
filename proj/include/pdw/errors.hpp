#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace pdw {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation (d <= 0, t outside
/// a profile, empty series, non-finite value).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The separation-rate bound is violated: |ddot| >= ddot_max.
class ParameterViolation : public Error {
 public:
  using Error::Error;
};

/// Separation reached zero. `time_min()` is the earliest crossing time.
class ConflictError : public Error {
 public:
  explicit ConflictError(double time_min);
  double time_min() const noexcept { return time_min_; }

 private:
  double time_min_;
};

/// A scenario invariant does not hold. `field()` names the offending field
/// using a dotted path such as `predecessor[2].v_kmh`.
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& message);
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// A scenario document is malformed. what() reads "source:line:column: detail"
/// with absent parts omitted.
class ParseError : public Error {
 public:
  ParseError(std::string detail, std::optional<std::size_t> line = {},
             std::optional<std::size_t> column = {}, const std::string& source = {});
  const std::string& detail() const noexcept { return detail_; }
  std::optional<std::size_t> line() const noexcept { return line_; }
  std::optional<std::size_t> column() const noexcept { return column_; }

 private:
  std::string detail_;
  std::optional<std::size_t> line_;
  std::optional<std::size_t> column_;
};

}  // namespace pdw
