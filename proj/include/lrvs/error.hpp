#pragma once

#include <stdexcept>
#include <string>

namespace lrvs {

enum class ErrorKind {
  Parse,      // malformed input document
  Schema,     // missing or unknown field, dangling reference
  Invariant,  // well-formed input that violates a domain invariant
  Constraint, // plan violates a chain constraint
};

/// Data error raised by ingestion and validation. The CLI maps these to exit code 2.
class DataError : public std::runtime_error {
public:
  DataError(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

}  // namespace lrvs
