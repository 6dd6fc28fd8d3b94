#pragma once

#include <stdexcept>
#include <string>

namespace scca {

/// Base class of every error raised by the library.
class SccaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shapes or counts that do not agree.
class DimensionError : public SccaError {
public:
    using SccaError::SccaError;
};

/// Malformed input file. Carries the 1-based data row and column when known.
class ParseError : public SccaError {
public:
    ParseError(const std::string& what, long row = -1, long col = -1)
        : SccaError(what), row_(row), col_(col) {}
    long row() const noexcept { return row_; }
    long col() const noexcept { return col_; }

private:
    long row_;
    long col_;
};

/// A column with zero spread cannot be scaled to unit norm.
class DegenerateColumnError : public SccaError {
public:
    DegenerateColumnError(const std::string& what, std::string column)
        : SccaError(what), column_(std::move(column)) {}
    const std::string& column() const noexcept { return column_; }

private:
    std::string column_;
};

class StratumError : public SccaError {
public:
    using SccaError::SccaError;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public SccaError {
public:
    using SccaError::SccaError;
};

/// Linear objective with an all-zero coefficient vector.
class ZeroGradientError : public SccaError {
public:
    using SccaError::SccaError;
};

/// The cross-product vanishes along the starting direction.
class DegenerateInitError : public SccaError {
public:
    using SccaError::SccaError;
};

/// All-zero matrix where a spectrum is required.
class DegenerateError : public SccaError {
public:
    using SccaError::SccaError;
};

/// A canonical variate is identically zero.
class DegenerateVariateError : public SccaError {
public:
    using SccaError::SccaError;
};

class IoError : public SccaError {
public:
    using SccaError::SccaError;
};

}  // namespace scca
