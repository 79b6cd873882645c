#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace graphembed {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. `line()` is 1-based; 0 when no line applies.
class ParseError : public Error {
public:
  ParseError(std::size_t line, const std::string& what)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

/// A caller broke an operation's precondition (e.g. eigenmaps on a directed graph).
class ContractViolation : public Error {
public:
  using Error::Error;
};

/// An iterative method ran out of iterations.
class ConvergenceError : public Error {
public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what + " (last residual " + std::to_string(residual) + ")"), residual_(residual) {}

  double residual() const noexcept { return residual_; }

private:
  double residual_;
};

/// The requested computation does not fit the available memory budget.
class ResourceError : public Error {
public:
  using Error::Error;
};

/// Training produced a non-finite parameter.
class NumericalError : public Error {
public:
  using Error::Error;
};

} // namespace graphembed
