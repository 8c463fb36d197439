#pragma once

#include <stdexcept>
#include <string>

namespace polycap {

/// Input outside the admissible domain of an operation (bad dimensions,
/// malformed obstacle, coefficient outside Z, ...).
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A computation that should have succeeded did not (singular system,
/// failed factorization). Indicates a bug or an unsupported discretization.
class ComputationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace polycap
