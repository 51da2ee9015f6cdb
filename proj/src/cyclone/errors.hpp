#pragma once

#include <stdexcept>

namespace cyclone {

/// Fixed-point bisection could not meet either the residual or the
/// bracket-width criterion.
struct ConvergenceFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The sign-change scan found more crossings than the three the theory
/// allows; the network hypotheses are probably violated.
struct SuspectCount : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The adaptive step controller stalled below the minimum step size.
struct StepSizeUnderflow : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Schwarzian derivative requested where |f'| is below machine threshold.
struct SingularDerivative : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised when a spec asks for hypothesis certification and it fails.
struct HypothesisViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace cyclone
