#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wigtom {

/// Base class for all wigtom errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
struct DomainError : Error {
  using Error::Error;
};

/// Polynomial degree above the configured maximum.
struct DegreeOverflowError : Error {
  using Error::Error;
};

/// Invalid or inconsistent run configuration.
struct ConfigError : Error {
  using Error::Error;
};

/// Tabular input that does not conform to the documented schema.
struct ParseError : Error {
  ParseError(const std::string& msg, std::size_t line_no, std::size_t column_no)
      : Error(msg + " (line " + std::to_string(line_no) + ", column " +
              std::to_string(column_no) + ")"),
        line(line_no),
        column(column_no) {}

  std::size_t line = 0;
  std::size_t column = 0;
};

}  // namespace wigtom
