#pragma once

#include <stdexcept>
#include <string>

namespace hsc {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad configuration or command usage (CLI exit code 1).
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// Missing/malformed input data (CLI exit code 2).
class DataError : public Error {
public:
    explicit DataError(const std::string& msg) : Error(msg) {}
};

// Numeric failure: non-finite values, invalid filter designs, etc. (CLI exit code 3).
class NumericError : public Error {
public:
    explicit NumericError(const std::string& msg) : Error(msg) {}
};

// Tensor/layer dimension mismatch.
class ShapeError : public Error {
public:
    explicit ShapeError(const std::string& msg) : Error(msg) {}
};

// Layer used out of order (e.g. backward before forward).
class StateError : public Error {
public:
    explicit StateError(const std::string& msg) : Error(msg) {}
};

} // namespace hsc
