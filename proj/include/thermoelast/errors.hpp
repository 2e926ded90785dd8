#pragma once

#include <stdexcept>
#include <string>

namespace thermoelast {

/// Invalid user-facing configuration (bad grid parameters, bad preset, bad file).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Caller broke an API contract (length mismatch, non-uniform sampling, ...).
struct ContractError : std::logic_error {
  using std::logic_error::logic_error;
};

/// Initial temperature not bounded below by a positive constant.
struct NonPositiveTemperature : ConfigError {
  using ConfigError::ConfigError;
};

/// Displacement or velocity data nonzero at a Dirichlet endpoint.
struct BoundaryViolation : ConfigError {
  using ConfigError::ConfigError;
};

/// A diagnostic hit the division floor: theta at or below eps_theta somewhere.
struct FloorTripped : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The solver was handed a state with non-positive temperature.
struct PositivityGuard : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace thermoelast
