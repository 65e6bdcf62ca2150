#pragma once

#include <stdexcept>
#include <string>

namespace novbar {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Two values that should live in the same algebraic context do not
// (different exponent groups, primes, or dimensions).
struct config_error : error {
    using error::error;
};

// Operation undefined for the given value (inverse of zero, ...).
struct domain_error : error {
    using error::error;
};

// Stated precondition violated by the caller.
struct precondition_error : error {
    using error::error;
};

// A structural invariant failed a runtime re-check.
struct verify_error : error {
    using error::error;
};

} // namespace novbar
