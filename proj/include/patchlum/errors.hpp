#pragma once

#include <stdexcept>
#include <string>

namespace patchlum {

// Bad input: malformed config, schema mismatch, out-of-domain argument.
// Maps to CLI exit code 1.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Model-validity or convergence failure: drive above threshold, degenerate
// spectrum, non-convergent fit. Maps to CLI exit code 2.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace patchlum
