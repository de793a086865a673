#pragma once

#include <stdexcept>
#include <string>

namespace fsvar {

/// Malformed or out-of-range run configuration. The CLI maps it to exit code 2.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Input data that violates a documented schema or invariant. Exit code 3.
class DataError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A numerical procedure could not produce a valid result (non-SPD matrix,
/// rank deficiency, overflow).
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// The VAR has a unit or explosive root, so no unconditional mean exists.
class NoSteadyStateError : public NumericalError {
public:
  NoSteadyStateError() : NumericalError("no steady state") {}
  explicit NoSteadyStateError(const std::string& detail)
      : NumericalError("no steady state: " + detail) {}
};

}  // namespace fsvar
