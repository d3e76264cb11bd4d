// error.hpp — Exception types shared by all qbatt modules

#pragma once

#include <stdexcept>
#include <string>

namespace qbatt {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Iterative eigen/propagator routine exceeded its iteration budget.
class NonConvergence : public Error {
public:
    using Error::Error;
};

class NotHermitian : public Error {
public:
    using Error::Error;
};

// Closed-form resonant constructions need delta1 == delta2 == 0.
class ResonanceRequired : public Error {
public:
    using Error::Error;
};

class DegenerateSpectrum : public Error {
public:
    using Error::Error;
};

// Argument outside the mathematical domain (e.g. Bose occupation at omega <= 0).
class DomainError : public Error {
public:
    using Error::Error;
};

class StepTooLarge : public Error {
public:
    using Error::Error;
};

class UnknownPreset : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace qbatt
