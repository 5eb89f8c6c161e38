#ifndef PSFA_ERRORS_HPP
#define PSFA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace psfa {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Numeric failures. A CLI maps these to exit code 3.
class NumericError : public Error {
public:
    using Error::Error;
};

class NotPositiveDefinite : public NumericError {
public:
    using NumericError::NumericError;
};

class DomainError : public NumericError {
public:
    using NumericError::NumericError;
};

class SingularInitialization : public NumericError {
public:
    using NumericError::NumericError;
};

class NonPositiveRate : public NumericError {
public:
    using NumericError::NumericError;
};

class NonFiniteValue : public NumericError {
public:
    using NumericError::NumericError;
};

class AllRestartsFailed : public NumericError {
public:
    using NumericError::NumericError;
};

class SingularReference : public NumericError {
public:
    using NumericError::NumericError;
};

class MonotonicityViolation : public NumericError {
public:
    using NumericError::NumericError;
};

// Bad inputs or shapes. A CLI maps these to exit code 2.
class DataError : public Error {
public:
    using Error::Error;
};

class InvalidParameter : public DataError {
public:
    using DataError::DataError;
};

class DimensionMismatch : public DataError {
public:
    using DataError::DataError;
};

class ZeroVariance : public DataError {
public:
    using DataError::DataError;
};

// File format failures, also exit code 2.
class IoError : public DataError {
public:
    using DataError::DataError;
};

class BadMagic : public IoError {
public:
    using IoError::IoError;
};

class UnsupportedVersion : public IoError {
public:
    using IoError::IoError;
};

class TruncatedFile : public IoError {
public:
    using IoError::IoError;
};

class CsvParseError : public IoError {
public:
    using IoError::IoError;
};

class ConfigError : public IoError {
public:
    using IoError::IoError;
};

}  // namespace psfa

#endif
