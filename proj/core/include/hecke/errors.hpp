#pragma once

#include <stdexcept>
#include <string>

namespace hecke {

// Bad user input: malformed q, reducible point, unknown builder name.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A mathematical hypothesis of the requested computation does not hold
// (lambda = 0 with ramification at x, lambda in the nucleus spectrum, ...).
struct HypothesisError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An internal consistency check failed. Always a bug or a falsified claim.
struct InvariantError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An enumeration would exceed the configured element budget.
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace hecke
