#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace chase {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Malformed source text. Carries a 1-based position.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& message, std::size_t line, std::size_t column)
      : Error(message), line_(line), column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class UnknownTrigger : public Error {
 public:
  using Error::Error;
};

class NotApplicable : public Error {
 public:
  using Error::Error;
};

class UnknownTarget : public Error {
 public:
  using Error::Error;
};

class KeepNotSubset : public Error {
 public:
  using Error::Error;
};

class VariantUnsupported : public Error {
 public:
  using Error::Error;
};

/// A search exceeded one of its configured caps.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& message, std::size_t factbases_examined = 0,
                 std::size_t derivations_examined = 0)
      : Error(message),
        factbases_examined_(factbases_examined),
        derivations_examined_(derivations_examined) {}

  std::size_t factbases_examined() const { return factbases_examined_; }
  std::size_t derivations_examined() const { return derivations_examined_; }

 private:
  std::size_t factbases_examined_;
  std::size_t derivations_examined_;
};

/// Canonical labeling search ran past its expansion budget.
class ResourceCap : public Error {
 public:
  using Error::Error;
};

class VersionMismatch : public Error {
 public:
  using Error::Error;
};

/// A stored derivation step could not be reproduced.
class ReplayFailure : public Error {
 public:
  using Error::Error;
};

/// A result failed its own certificate check.
class VerificationFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace chase
