// errors.hpp: Exception types shared across the library and the CLI runner

#pragma once

#include <stdexcept>
#include <string>

namespace dissichain {

// Input violates a precondition (bad index, bad shape, bad parameter).
// Library code throws std::invalid_argument / std::out_of_range for these;
// this alias exists so callers can catch the whole family in one place.
using InvalidInput = std::logic_error;

// A numerical guard tripped: step size too large, basis too large,
// relaxation not converged, positivity lost beyond tolerance.
class GuardError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Reading or writing an artifact failed.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace dissichain
