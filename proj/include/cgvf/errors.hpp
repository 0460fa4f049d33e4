#pragma once

#include <stdexcept>
#include <string>

namespace cgvf {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad argument values: dimension mismatches, out-of-range indices,
/// invalid sizes, unknown names.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Scenario-file syntax errors, with 1-based source position.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, int line, int col)
      : Error(msg + " (line " + std::to_string(line) + ", column " +
              std::to_string(col) + ")"),
        line_(line),
        col_(col) {}
  int line() const { return line_; }
  int column() const { return col_; }

 private:
  int line_;
  int col_;
};

/// Thrown when the planar field norm drops below the configured floor,
/// violating the hypothesis of the heading-alignment guidance law.
class SingularHeading : public Error {
 public:
  using Error::Error;
};

}  // namespace cgvf
