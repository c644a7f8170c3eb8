#pragma once

#include <stdexcept>
#include <string>

namespace resmatch {

/// Base class for all resmatch errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid argument to an operation (bad sigma, kernel wider than image, ...).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Malformed or unsupported encoded image data.
class DecodeError : public Error {
public:
    using Error::Error;
};

/// Filesystem failure; the message names the offending path.
class IoError : public Error {
public:
    using Error::Error;
};

/// Degenerate input: zero-variance image, coincident or collinear points.
class DegenerateError : public Error {
public:
    using Error::Error;
};

/// A sample window or point lies too close to the image border.
class BorderError : public Error {
public:
    using Error::Error;
};

/// Robust estimation found no model with sufficient consensus.
class NoConsensusError : public Error {
public:
    using Error::Error;
};

/// A serialized report does not match the expected schema.
class SchemaError : public Error {
public:
    using Error::Error;
};

} // namespace resmatch
