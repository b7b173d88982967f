#pragma once

#include <stdexcept>
#include <string>

namespace jc {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input validation / inconsistent-argument errors.
struct SchemaError : Error {
  using Error::Error;
};
struct AlgebraMismatchError : Error {
  using Error::Error;
};
struct DimensionMismatchError : Error {
  using Error::Error;
};
struct NotEssentiallySimpleError : Error {
  using Error::Error;
};
struct InvalidFrameError : Error {
  using Error::Error;
};
struct NonConvexSpecError : Error {
  using Error::Error;
};
struct OverlappingSupportsError : Error {
  using Error::Error;
};
struct UnsupportedSystemError : Error {
  using Error::Error;
};
struct UnsupportedOmegaError : Error {
  using Error::Error;
};

// Numeric failures.
struct NonFiniteError : Error {
  using Error::Error;
};
struct NonSymmetricError : Error {
  using Error::Error;
};
struct NonSmoothPointError : Error {
  using Error::Error;
};

}  // namespace jc
