#pragma once

#include <stdexcept>
#include <string>

namespace floquet {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Two trigonometric polynomials have irrationally related frequencies.
class FrequencyMismatch : public Error {
public:
    using Error::Error;
};

/// The problem is degenerate for the requested method (singular leading
/// coefficient, decoupled system, ill-conditioned interpolation, ...).
class DegenerateProblem : public Error {
public:
    using Error::Error;
};

/// Malformed job configuration or problem definition.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Failure reading or writing a file.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace floquet
