#pragma once

#include <cstddef>

namespace potfp {

// Distance metric for d(x, S) computations in X coordinates.
enum class Metric { euclidean, sup };

// Numerical tolerances used across the library.  Defaults are the values the
// whole test suite and the CLI are calibrated against; construct a custom
// instance only when you deliberately want looser/tighter behaviour.
struct Tolerances {
  double tie = 1e-9;              // argmax gap below which actions tie
  double equilibrium = 1e-9;      // slack for is_nash / classification
  double potential_check = 1e-9;  // deviation-identity slack
  double support_zero = 1e-10;    // mixed-NE weight considered zero
  double solver_residual = 1e-8;  // accepted residual of face systems
  double time = 1e-12;            // switch-time bisection accuracy
  double simplex = 1e-12;         // simplex/polytope membership slack
  double cond_limit = 1e10;       // condition number above which a matrix
                                  // counts as singular (regularity test)
};

inline const Tolerances& default_tolerances() {
  static const Tolerances tol{};
  return tol;
}

}  // namespace potfp
