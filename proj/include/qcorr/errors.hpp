#pragma once

#include <stdexcept>
#include <string>

namespace qcorr {

/// Raised when an input violates a documented bound (Hermiticity, trace,
/// positivity, label membership, dimension agreement).
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when an operation is asked to work beyond its supported
/// subsystem dimensions.
class UnsupportedDimension : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Raised by the state-file reader for malformed documents.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File could not be opened, read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace qcorr
