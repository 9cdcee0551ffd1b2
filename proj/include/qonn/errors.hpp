#ifndef QONN_ERRORS_HPP
#define QONN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qonn {

// Base for all engine errors so callers can catch the whole family at once.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad sizes, indices out of range, malformed arguments.
struct InvalidArgument : Error {
    explicit InvalidArgument(const std::string& msg) : Error(msg) {}
};

// Squeezing strength outside the supported hardware range.
struct BoundViolation : Error {
    explicit BoundViolation(const std::string& msg) : Error(msg) {}
};

// An internal consistency check failed (non-unitary mesh, negative norm, ...).
struct InternalError : Error {
    explicit InternalError(const std::string& msg) : Error(msg) {}
};

// Combinatorial enumeration would exceed the configured safety cap.
struct ResourceLimit : Error {
    explicit ResourceLimit(const std::string& msg) : Error(msg) {}
};

// Heralding denominator (norm of the conditional state) vanished.
struct DegenerateState : Error {
    explicit DegenerateState(const std::string& msg) : Error(msg) {}
};

// Fock-space cutoff too small for the requested gate/regime.
struct CutoffTooSmall : Error {
    explicit CutoffTooSmall(const std::string& msg) : Error(msg) {}
};

// Every optimizer restart failed to produce a finite result.
struct OptimizationFailure : Error {
    explicit OptimizationFailure(const std::string& msg) : Error(msg) {}
};

// File / CSV / JSON problems.
struct IoError : Error {
    explicit IoError(const std::string& msg) : Error(msg) {}
};

// Run-configuration schema violations.
struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

}  // namespace qonn

#endif
