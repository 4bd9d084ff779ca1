#pragma once

#include <stdexcept>
#include <string>

namespace histspec {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A precondition on an argument was violated (bad size, bad level count, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

// Image dimensions or level counts do not agree between two operands.
class DimensionMismatch : public Error {
public:
    using Error::Error;
};

// A target histogram does not sum to the pixel count it is applied to.
class HistogramMismatch : public Error {
public:
    using Error::Error;
};

// A computation produced NaN/inf or hit a degenerate configuration.
class NumericalError : public Error {
public:
    using Error::Error;
};

// Malformed or unreadable file content.
class FormatError : public Error {
public:
    using Error::Error;
};

// Watermark message does not fit the host histogram, or no signal to read.
class CapacityError : public Error {
public:
    using Error::Error;
};

}  // namespace histspec
