#pragma once

#include <stdexcept>
#include <string>

namespace kograd {

/// Requested value lies outside the reachable range of a monotone function,
/// even after bracket expansion up to the documented cap.
struct RangeError : std::runtime_error {
    explicit RangeError(const std::string& msg) : std::runtime_error(msg) {}
};

/// An integrand returned NaN/Inf away from a declared endpoint singularity.
struct NonFiniteError : std::runtime_error {
    explicit NonFiniteError(const std::string& msg) : std::runtime_error(msg) {}
};

/// An iteration failed to reach its tolerance within the allowed work.
struct NoConvergenceError : std::runtime_error {
    explicit NoConvergenceError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A documented precondition of an operation was violated by the caller.
struct PreconditionError : std::runtime_error {
    explicit PreconditionError(const std::string& msg) : std::runtime_error(msg) {}
};

/// The integral condition required by a construction does not hold.
struct ConditionNotMetError : std::runtime_error {
    explicit ConditionNotMetError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A truncated improper integral whose remainder could not be bounded.
struct TailError : std::runtime_error {
    explicit TailError(const std::string& msg) : std::runtime_error(msg) {}
};

/// No validity window could be located numerically.
struct WindowEmptyError : std::runtime_error {
    explicit WindowEmptyError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Operation not available for this representation (e.g. opaque callables).
struct UnsupportedError : std::runtime_error {
    explicit UnsupportedError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace kograd
