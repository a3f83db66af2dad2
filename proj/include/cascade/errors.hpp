#pragma once

#include <stdexcept>
#include <string>

namespace cascade {

/// Invalid or inconsistent physical configuration / input file. CLI exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure: pole on the frequency axis, integrator abort,
/// non-finite state. CLI exit code 3.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// An invariant check requested by the user failed. CLI exit code 4.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cascade
