#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace ppcf {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TypeError : public Error {
 public:
  TypeError(const std::string& message, std::string subterm)
      : Error(message + " in `" + subterm + "`"), subterm_(std::move(subterm)) {}
  const std::string& subterm() const noexcept { return subterm_; }

 private:
  std::string subterm_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, std::string message,
             std::vector<std::string> expected = {});
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::vector<std::string> expected_;
};

class UnknownMacro : public Error {
 public:
  using Error::Error;
};

class ArityError : public Error {
 public:
  using Error::Error;
};

class UnknownPrimitive : public Error {
 public:
  using Error::Error;
};

class InvariantViolation : public Error {
 public:
  using Error::Error;
};

class QuadratureFailure : public Error {
 public:
  using Error::Error;
};

class DimensionLimit : public Error {
 public:
  using Error::Error;
};

class NonConvergent : public Error {
 public:
  NonConvergent(std::size_t iterations, std::vector<double> last_masses);
  std::size_t iterations() const noexcept { return iterations_; }
  const std::vector<double>& last_masses() const noexcept { return last_masses_; }

 private:
  std::size_t iterations_;
  std::vector<double> last_masses_;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace ppcf
