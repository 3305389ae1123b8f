#pragma once

#include <stdexcept>
#include <string>

namespace qdcascade {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Wrong matrix/vector size.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Physical or configuration parameter out of its domain.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Non-convergence, overflow, or a result that fails a numerical validity check.
class NumericError : public Error {
public:
    using Error::Error;
};

/// Detection gate that collects no coincidences (normalization trace <= 0).
class DegenerateGateError : public NumericError {
public:
    using NumericError::NumericError;
};

/// Off-diagonal structure does not match the expected X pattern.
class FormError : public NumericError {
public:
    using NumericError::NumericError;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace qdcascade
