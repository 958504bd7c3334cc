#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mcar {

/// Bad arguments: negative chi-square quantile, n < 2, non-finite matrix entries...
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Too few observed cells in a column for a complete-case statistic.
class InsufficientObserved : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// An amputation request that would delete every cell of a column.
class WouldEmptyColumn : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// Malformed CSV. Row and column are 1-based file positions (row 1 is the header).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t row, std::size_t column)
      : std::runtime_error(what + " (row " + std::to_string(row) + ", column " +
                           std::to_string(column) + ")"),
        row_(row),
        column_(column) {}

  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

/// Numerical breakdown, e.g. a non positive-definite observed block in EM.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The requested test cannot be computed on this sample.
class InapplicableTest : public std::runtime_error {
 public:
  enum class Reason {
    NothingToTest,      // q = 0, or an empty statistic vector
    OldTestInapplicable,  // A_n with no complete column
    SinglePattern,      // Little's d2 with df = 0
    DegenerateSample,   // every singular value of the covariance estimate is zero
    FullyMissingRow,
  };

  InapplicableTest(Reason reason, const std::string& what)
      : std::runtime_error(what), reason_(reason) {}

  Reason reason() const noexcept { return reason_; }

 private:
  Reason reason_;
};

}  // namespace mcar
