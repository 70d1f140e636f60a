#pragma once

#include <stdexcept>
#include <string>

namespace fb {

// Base of every error raised by the library. The three subclasses map onto
// the CLI exit codes (2 config, 3 data, 4 numeric).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed or out-of-range parameters: spec strings, policy parameters,
// config files.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Observations that violate a contract: empty samples, values outside the
// support interval, unreadable CSV input.
class DataError : public Error {
public:
    using Error::Error;
};

// A numeric quantity is undefined for the given inputs.
class NumericError : public Error {
public:
    using Error::Error;
};

}  // namespace fb
