#pragma once

#include <stdexcept>
#include <string>

namespace wcett {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Graph validation
struct CyclicGraph : Error {
  using Error::Error;
};
struct DisconnectedEdge : Error {
  using Error::Error;
};
struct BadIds : Error {
  using Error::Error;
};
struct TooManyPaths : Error {
  using Error::Error;
};

// Basis / spanner
struct NotInSpan : Error {
  using Error::Error;
};
struct MissingMeasurement : Error {
  using Error::Error;
};

// Solver
struct NumericFailure : Error {
  using Error::Error;
};
struct InfeasibleWindows : Error {
  using Error::Error;
};

// Front end
struct IoError : Error {
  using Error::Error;
};
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace wcett
