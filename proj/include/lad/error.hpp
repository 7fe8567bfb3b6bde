#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace lad {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input document.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Input parsed but violates one or more invariants. All violations are kept.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> violations);

  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

// Travel provider failure: unknown site, transport or protocol error.
class ProviderError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

enum class InfeasibleKind { kBudget, kResource };

// No assignment satisfies all constraints.
class InfeasibleError : public Error {
 public:
  InfeasibleError(InfeasibleKind kind, const std::string& what)
      : Error(what), kind_(kind) {}

  InfeasibleKind kind() const { return kind_; }

 private:
  InfeasibleKind kind_;
};

// Metric undefined because some groups were left uncovered.
class PartialCoverageError : public Error {
 public:
  explicit PartialCoverageError(std::vector<std::string> uncovered);

  const std::vector<std::string>& uncovered() const { return uncovered_; }

 private:
  std::vector<std::string> uncovered_;
};

}  // namespace lad
