#pragma once

#include <stdexcept>
#include <string>

namespace treenc {

// Base of every error thrown by the library. Callers that only care about
// "the input was bad" can catch this one.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A schedule violates the internal-transportation rule.
class FeasibilityError : public Error {
 public:
  FeasibilityError(const std::string& what, std::size_t prefix)
      : Error(what), prefix_(prefix) {}
  // Length of the shortest infeasible prefix.
  std::size_t prefix() const noexcept { return prefix_; }

 private:
  std::size_t prefix_;
};

class UnsupportedVariantError : public Error {
 public:
  using Error::Error;
};

class GapUndefinedError : public Error {
 public:
  using Error::Error;
};

// Exhaustive search refused because the instance is too large.
class BudgetExceededError : public Error {
 public:
  using Error::Error;
};

// Malformed instance or results file. `path` names the offending field.
class SchemaError : public Error {
 public:
  SchemaError(const std::string& path, const std::string& what)
      : Error(path + ": " + what), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace treenc
