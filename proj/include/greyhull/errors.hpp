#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace greyhull {

/// Invalid vessel configuration (non-positive inertias, singular mass matrix, ...).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller violated an operation precondition (length mismatch, bad option, ...).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Non-finite value produced or consumed during integration.
class SimulationFault : public std::runtime_error {
 public:
  explicit SimulationFault(const std::string& what, std::ptrdiff_t step = -1)
      : std::runtime_error(what), step_(step) {}
  /// Index of the failing step inside a rollout, -1 when unknown.
  std::ptrdiff_t step() const { return step_; }

 private:
  std::ptrdiff_t step_;
};

/// Measured trajectory with zero path length or zero mean speed.
class DegenerateScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file; carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace greyhull
