#pragma once

#include <stdexcept>
#include <string>

namespace gkdv {

// Thrown when the elliptic profile equation has no positive turning point,
// or the requested speed is outside the admissible range of the family.
struct NoSolitonError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when the soliton family fails the mass-monotonicity stability test.
struct DegenerateFamilyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when a constrained inversion is requested with an incompatible
// right-hand side (orthogonality to the operator kernel violated).
struct NotSolvableError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when the discretized operator has no negative ground state.
struct SpectralAnomalyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when a pointwise quotient hits a zero of the denominator.
struct DivisionDomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when a source term that should be localized fails to decay at the
// grid ends; signals a misconfigured limit constant upstream.
struct CancellationFailureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when a cascade index is requested before its predecessors.
struct OrderViolationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when time evolution produces NaNs or blows up.
struct DivergenceError : std::runtime_error {
    double last_good_time;
    explicit DivergenceError(const std::string& what, double t)
        : std::runtime_error(what), last_good_time(t) {}
};

// Thrown when a fit fails to locate a bump above the noise floor.
struct NotFoundError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace gkdv
