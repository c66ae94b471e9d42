// Exception types shared across the library.
#pragma once

#include <stdexcept>
#include <string>

namespace nlica {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Shape or size mismatch between operands.
struct DimensionError : Error {
    using Error::Error;
};

// A caller violated an operation's precondition.
struct ContractError : Error {
    using Error::Error;
};

// NaN/Inf, divergence, or a singular matrix where a regular one is required.
struct NumericError : Error {
    using Error::Error;
};

// Invalid spec or experiment configuration. The message lists every violation.
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace nlica
