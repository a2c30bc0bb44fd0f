#pragma once

#include <stdexcept>
#include <string>

namespace kforge {

/// Malformed or inconsistent input: bad shapes, schema violations, bad flags.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A Gram matrix that is not Hermitian positive definite.
struct MetricError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A resource guard tripped (parameter count, group size, builder bounds).
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An internal identity that must hold under the documented preconditions
/// did not hold.
struct ConsistencyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace kforge
