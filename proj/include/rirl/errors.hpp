#pragma once

#include <stdexcept>

namespace rirl {

/// Solver residual too large, factorization failed, or an iteration cap hit.
struct NumericalFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An oracle verdict contradicts nature-side ground truth.
struct ProtocolViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Deterministic-policy enumeration would exceed the desk-scale guard.
struct PolicySpaceTooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Cut vector below the degeneracy floor; carries no information.
struct DegenerateCut : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Feature matrix has zero spread; no identification possible.
struct DegenerateFeatures : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace rirl
