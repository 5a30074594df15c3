#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gadforge {

enum class ErrorKind {
  Config,       // invalid parameter or flag combination
  Parse,        // malformed input file
  Io,           // file could not be opened / written
  Contract,     // precondition or shape violation
  Saturation,   // perturbation cannot find a free endpoint
  Split,        // not enough anomalies for the requested split
  Injection,    // unlabeled pool too small for the requested injection
  Metric,       // metric undefined for the given labels
  Numeric,      // non-finite value in a loss or gradient
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Parse failure carrying the 1-based line number of the offending input.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(ErrorKind::Parse, "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace gadforge
