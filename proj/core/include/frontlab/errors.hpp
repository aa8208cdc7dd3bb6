#pragma once

#include <stdexcept>
#include <string>

namespace frontlab {

/// A coefficient field or reaction violates its construction invariants.
struct InvalidFieldError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// An iterative solver did not converge; message carries the residual report.
struct SolverFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Riccati blow-up or missing decaying branch: lambda at or below the
/// spectral edge for the truncated problem.
struct SpectralInfeasibility : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Ordered inputs came out unordered beyond tolerance.
struct ComparisonFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Internal consistency of a multi-stage computation broke (e.g. a
/// backward-start sequence that should be monotone is not).
struct SolverIntegrityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A diagnostic cannot be extracted from the data (no level crossing,
/// insufficient time range, ...).
struct DiagnosticsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Configuration file problem; message carries file:line where known.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace frontlab
