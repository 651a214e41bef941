#pragma once

#include <stdexcept>
#include <string>

namespace dbd {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input file or stream (CSV, ARFF, URL list, snapshot, model file).
class ParseError : public Error {
public:
    using Error::Error;
};

/// A caller supplied an argument that violates an operation's precondition.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Instance or dataset schema does not match the model it is used with.
class SchemaMismatch : public Error {
public:
    using Error::Error;
};

/// Inconsistent configuration (duplicate providers, unknown learner, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace dbd
