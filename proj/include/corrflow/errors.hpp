#pragma once

#include <stdexcept>
#include <string>

namespace corrflow {

// Bad arguments or incompatible objects: grid mismatch, invalid constants,
// malformed inputs that are not scenario-file syntax errors.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Probability mass at the box boundary above the leak threshold: the periodic
// lattice no longer models the infinite line.
class LeakError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A state constructor was handed a domain that cannot hold the state.
class GridTooSmallError : public LeakError {
public:
    using LeakError::LeakError;
};

// Free propagation to the requested time would spread the state past the box.
class PredictedLeakError : public LeakError {
public:
    using LeakError::LeakError;
};

// Significant momentum density at the lattice Nyquist wavenumber.
class NyquistError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A boost pushed the momentum distribution past the representable band.
class MomentumOverflowError : public NyquistError {
public:
    using NyquistError::NyquistError;
};

}  // namespace corrflow
