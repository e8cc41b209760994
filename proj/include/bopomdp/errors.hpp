#pragma once

#include <stdexcept>
#include <string>

namespace bopomdp {

// Cholesky update could not produce a positive definite factor even at the
// maximum jitter level.
struct FactorizationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Arc-length normalization of a spline did not converge.
struct NormalizationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Spline end tangent too short to define a heading.
struct DegenerateTangent : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NoFeasibleAction : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace bopomdp
