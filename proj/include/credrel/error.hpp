#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace credrel {

// Base for every error the engine raises on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Precondition violation in a numeric primitive (non-positive shape, t outside [0,1], ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Underflow, non-convergence or a non-finite intermediate.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

struct ValidationIssue {
  std::string path;
  std::string message;
};

// Invalid configuration; carries every violation found, each with a field path.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<ValidationIssue> issues)
      : Error(render(issues)), issues_(std::move(issues)) {}
  ConfigError(std::string path, std::string message)
      : ConfigError(std::vector<ValidationIssue>{{std::move(path), std::move(message)}}) {}

  const std::vector<ValidationIssue>& issues() const noexcept { return issues_; }

 private:
  static std::string render(const std::vector<ValidationIssue>& issues) {
    std::string out = "invalid configuration:";
    for (const auto& i : issues) out += "\n  " + i.path + ": " + i.message;
    return out;
  }

  std::vector<ValidationIssue> issues_;
};

}  // namespace credrel
