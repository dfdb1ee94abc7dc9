#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace giantpcw {

// Bad argument or out-of-domain input.
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Solver failure, no root, lost norm, ...
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Non-fatal diagnostics collected alongside a result.
using Warnings = std::vector<std::string>;

}  // namespace giantpcw
