#ifndef BANDFOREST_ERROR_HPP
#define BANDFOREST_ERROR_HPP

#include <stdexcept>
#include <string>

namespace bandforest {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or unreadable input data (ragged rows, empty cells, unknown labels).
class IngestError : public Error {
public:
    using Error::Error;
};

/// Invalid options or arguments (missing label column, bad flag values).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A structure violates one of its invariants (model files, band graphs).
class IntegrityError : public Error {
public:
    using Error::Error;
};

/// Model file has a format version this build cannot read.
class VersionError : public IntegrityError {
public:
    using IntegrityError::IntegrityError;
};

/// Model file section could not be parsed.
class ParseError : public IntegrityError {
public:
    using IntegrityError::IntegrityError;
};

} // namespace bandforest

#endif // BANDFOREST_ERROR_HPP
