#pragma once

#include <stdexcept>

namespace lionman {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad argument values, malformed spec strings, precondition failures.
struct InvalidInput : Error { using Error::Error; };
// Object state does not admit the operation (e.g. moving from outside the domain).
struct InvalidState : Error { using Error::Error; };
// No unique geodesic (antipodal sphere points).
struct DegenerateGeodesic : Error { using Error::Error; };
// Curvature comparison fails: domain too large for the requested geometry.
struct DomainTooLarge : Error { using Error::Error; };
// A hypothesis checked at runtime does not hold on sampled inputs.
struct HypothesisViolation : Error { using Error::Error; };
// A scripted adversary ran out of moves.
struct StrategyExhausted : Error { using Error::Error; };
// Sequence too short for the requested window.
struct InsufficientData : Error { using Error::Error; };
// Non-finite intermediate or loss of a structural guarantee during evaluation.
struct NumericFailure : Error { using Error::Error; };

} // namespace lionman
