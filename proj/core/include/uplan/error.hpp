#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace uplan {

// Base for every error the library reports to callers.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed instance or policy document.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Well-formed document that violates one or more model invariants.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> issues);

  const std::vector<std::string>& issues() const { return issues_; }

 private:
  std::vector<std::string> issues_;
};

// A configured cap (switch count, node count, enumeration size) was exceeded.
class LimitError : public Error {
 public:
  using Error::Error;
};

// Caller broke an operation's precondition (wrong configuration class,
// transition that belongs to another configuration, incomplete policy...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace uplan
