#pragma once

#include <stdexcept>
#include <string>

namespace lorentz {

struct LorentzError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Ray met an obstacle with |omega . n| below the grazing tolerance.
struct TangentialHit : LorentzError {
    using LorentzError::LorentzError;
};

/// Raised by routines that need a collision (transfer map, flights) when none exists.
struct NoCollision : LorentzError {
    bool horizon;  // true: beyond t_horizon, false: provably clear rational channel
    NoCollision(const std::string& what, bool beyond_horizon)
        : LorentzError(what), horizon(beyond_horizon) {}
};

struct NotOnBoundary : LorentzError {
    using LorentzError::LorentzError;
};

/// Direction outside the first octant 0 < omega2 < omega1.
struct OctantError : LorentzError {
    using LorentzError::LorentzError;
};

struct PrecisionExhausted : LorentzError {
    using LorentzError::LorentzError;
};

/// Expansion not long enough to locate N(alpha, eps).
struct ExpansionTooShort : LorentzError {
    using LorentzError::LorentzError;
};

struct CFLViolation : LorentzError {
    using LorentzError::LorentzError;
};

struct NegativeDensity : LorentzError {
    using LorentzError::LorentzError;
};

struct QuadratureBudgetExhausted : LorentzError {
    double achieved;
    QuadratureBudgetExhausted(const std::string& what, double err)
        : LorentzError(what), achieved(err) {}
};

struct InvalidArgument : LorentzError {
    using LorentzError::LorentzError;
};

}  // namespace lorentz
