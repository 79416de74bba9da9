#pragma once

#include <stdexcept>
#include <string>

namespace toeplitz {

// Bad input: malformed group data, chain violating its constraints, mismatched elements.
struct SpecError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A query needs a level beyond the configured chain prefix.
struct DepthExhausted : SpecError {
    using SpecError::SpecError;
};

// A computed identity that must hold did not.
struct InvariantViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace toeplitz
