#pragma once

#include <stdexcept>
#include <string>

namespace potfp {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};
struct InvalidCounts : Error {
  using Error::Error;
};
struct OutOfPolytope : Error {
  using Error::Error;
};
struct InvalidSimplex : Error {
  using Error::Error;
};
struct IndexOutOfRange : Error {
  using Error::Error;
};

// Raised when a game admits no exact potential; carries the largest
// deviation-identity violation found.
struct NotPotentialGame : Error {
  double max_violation;
  explicit NotPotentialGame(const std::string& msg, double violation)
      : Error(msg), max_violation(violation) {}
};

struct TooLarge : Error {
  using Error::Error;
};
struct NotAnEquilibrium : Error {
  using Error::Error;
};
struct NotStrictPure : Error {
  using Error::Error;
};
struct DegenerateSegment : Error {
  using Error::Error;
};
struct NotConverged : Error {
  using Error::Error;
};
struct NonPotentialInput : Error {
  using Error::Error;
};
struct EmptyEquilibriumList : Error {
  using Error::Error;
};
struct IOFailure : Error {
  using Error::Error;
};

}  // namespace potfp
