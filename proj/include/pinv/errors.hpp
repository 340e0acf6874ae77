#pragma once

#include <stdexcept>
#include <string>

namespace pinv {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Dimensions of an argument do not match what the operation requires,
// or two buffers that must be distinct alias each other.
struct ShapeError : Error {
  using Error::Error;
};

// The factorization is not in the state the operation requires
// (e.g. reusing storage already consumed by pinv_apply).
struct WrongStateError : Error {
  using Error::Error;
};

// Loss of positive definiteness while factoring a Gram matrix.
struct NumericBreakdown : Error {
  using Error::Error;
};

struct DivideByZero : NumericBreakdown {
  using NumericBreakdown::NumericBreakdown;
};

// Malformed matrix text; carries the 1-based line and column of the offence.
struct ParseError : Error {
  ParseError(const std::string& msg, int line_no, int column_no)
      : Error("line " + std::to_string(line_no) + ", column " +
              std::to_string(column_no) + ": " + msg),
        line(line_no),
        column(column_no) {}
  int line;
  int column;
};

// Entry counts disagree with the declared dimensions.
struct DimensionError : ParseError {
  using ParseError::ParseError;
};

}  // namespace pinv
