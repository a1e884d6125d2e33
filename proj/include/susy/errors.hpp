#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace susy {

enum class ErrorKind {
  Domain,
  Degenerate,
  NonConvergence,
  Unsupported,
  InconclusiveFit,
  Inconsistency,
  Parse,
  Precondition,
};

const char* to_string(ErrorKind kind);

/// Base class of every error raised by the library. The kind drives the CLI exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& message) : Error(ErrorKind::Domain, message) {}
};

class UnsupportedOperation : public Error {
 public:
  explicit UnsupportedOperation(const std::string& message)
      : Error(ErrorKind::Unsupported, message) {}
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& message) : Error(ErrorKind::Parse, message) {}
};

class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& message)
      : Error(ErrorKind::Precondition, message) {}
};

class InconclusiveFit : public Error {
 public:
  explicit InconclusiveFit(const std::string& message)
      : Error(ErrorKind::InconclusiveFit, message) {}
};

class InconsistencyError : public Error {
 public:
  explicit InconsistencyError(const std::string& message)
      : Error(ErrorKind::Inconsistency, message) {}
};

/// Integration or iteration failure; carries the abscissa (or parameter) where it happened.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& message, double where);
  double where() const noexcept { return where_; }

 private:
  double where_;
};

/// A transformation denominator (u or W) vanishes or falls below the nodeless threshold.
class DegenerateTransformError : public Error {
 public:
  DegenerateTransformError(const std::string& message, double location,
                           std::optional<std::size_t> stage = std::nullopt);
  double location() const noexcept { return location_; }
  std::optional<std::size_t> stage() const noexcept { return stage_; }

 private:
  double location_;
  std::optional<std::size_t> stage_;
};

}  // namespace susy
