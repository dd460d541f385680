#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace karamata {

/// Root of every error the toolkit raises. The CLI maps subclasses onto
/// stable exit codes (see `exit_code_for`).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text, or a call to an unknown function.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// An argument outside a function's real domain, or a non-finite result.
class DomainError : public Error {
 public:
  DomainError(const std::string& what, std::string subexpression)
      : Error(what + " in `" + subexpression + "`"), subexpression_(std::move(subexpression)) {}

  const std::string& subexpression() const noexcept { return subexpression_; }

 private:
  std::string subexpression_;
};

class UnboundVariable : public Error {
 public:
  explicit UnboundVariable(const std::string& name)
      : Error("unbound variable '" + name + "'"), name_(name) {}

  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

/// A caller-side contract violation (x < 1, ratio <= 1, too few samples, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace karamata
