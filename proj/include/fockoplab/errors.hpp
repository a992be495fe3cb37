#pragma once

#include <stdexcept>
#include <string>

namespace fockoplab {

// Base class for all library errors so callers can catch one type.
struct FockError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Evaluation requested outside a truncated series' certified disc.
struct RadiusExceeded : FockError {
    using FockError::FockError;
};

// Too few nonzero Taylor coefficients to estimate growth.
struct InsufficientCoefficients : FockError {
    using FockError::FockError;
};

// Operation requires a structured exp-quadratic multiplier.
struct WrongMultiplierKind : FockError {
    using FockError::FockError;
};

// lambda in {0, 1} where the iterate algebra degenerates.
struct DegenerateLambda : FockError {
    using FockError::FockError;
};

// Affine symbol with lambda = 1 has no fixed point unless a = 0.
struct NoFixedPoint : FockError {
    using FockError::FockError;
};

// Input violates a documented precondition of a report routine.
struct HypothesisViolated : FockError {
    using FockError::FockError;
};

// Adaptive loop exhausted its budget without certifying the result.
struct NonConvergent : FockError {
    using FockError::FockError;
};

// Numeric classification could not be certified either way.
struct IndeterminateLiminal : FockError {
    using FockError::FockError;
};

// Malformed configuration or JSON input.
struct ConfigInvalid : FockError {
    using FockError::FockError;
};

// A case split reached a state the theory says is unreachable.
struct InternalInconsistency : FockError {
    using FockError::FockError;
};

}  // namespace fockoplab
