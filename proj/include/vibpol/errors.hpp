#pragma once

#include <stdexcept>
#include <string>

namespace vibpol {

// Bad input: malformed config file, invalid parameter value, mismatched grids.
// The CLI maps this to exit code 1.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// An iterative solver failed to reach its tolerance (SCP fixed point, VDMFT
// loop, bath reconstruction).  Carries the residual history in the message.
// The CLI maps this to exit code 2.
struct ConvergenceError : std::runtime_error {
    explicit ConvergenceError(const std::string& msg) : std::runtime_error(msg) {}
};

// Unstable physics: negative renormalized eigenvalue, dt beyond the stability
// bound.  Treated as a configuration problem by the CLI (exit code 1).
struct InstabilityError : std::runtime_error {
    explicit InstabilityError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace vibpol
