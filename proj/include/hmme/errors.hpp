#ifndef HMME_ERRORS_HPP
#define HMME_ERRORS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hmme {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A group block has the wrong number of rows or columns.
/// Group ordinals are 1-based, matching the printed message.
class DimensionError : public Error {
  public:
    DimensionError(const std::string& what, std::int64_t group_ordinal)
        : Error(what), group_(group_ordinal) {}
    std::int64_t group() const { return group_; }

  private:
    std::int64_t group_;
};

/// A NaN or infinity was found in input data. Locations are 1-based;
/// column 0 means the response vector.
class NonFiniteError : public Error {
  public:
    NonFiniteError(const std::string& what, std::int64_t group_ordinal,
                   std::int64_t row, std::int64_t column)
        : Error(what), group_(group_ordinal), row_(row), column_(column) {}
    std::int64_t group() const { return group_; }
    std::int64_t row() const { return row_; }
    std::int64_t column() const { return column_; }

  private:
    std::int64_t group_;
    std::int64_t row_;
    std::int64_t column_;
};

/// Accumulation of sufficient statistics overflowed to a non-finite value.
class AccumulationError : public Error {
  public:
    using Error::Error;
};

/// A stage update was requested out of order.
class StageOrderError : public Error {
  public:
    using Error::Error;
};

/// A pivot fell below the singularity threshold; the fixed-effect system
/// is rank deficient (or the fixed effects are confounded with group means).
class SingularSystemError : public Error {
  public:
    using Error::Error;
};

/// The requested dense system exceeds the size cap.
class SizeGuardError : public Error {
  public:
    using Error::Error;
};

/// Malformed text input. line() is the 1-based line number.
class ParseError : public Error {
  public:
    ParseError(const std::string& what, std::int64_t line)
        : Error(what), line_(line) {}
    std::int64_t line() const { return line_; }

  private:
    std::int64_t line_;
};

/// File could not be opened, read, or written.
class IoError : public Error {
  public:
    using Error::Error;
};

}  // namespace hmme

#endif  // HMME_ERRORS_HPP
