#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pairstat {

/// Error classes. Each maps onto one CLI exit code.
enum class ErrorKind {
  invalid_argument,  // exit 1
  parse,             // exit 2
  numerical,         // exit 3
  consistency,       // exit 4
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what)
      : Error(ErrorKind::invalid_argument, what) {}
};

/// Malformed input file. `line` is 1-based; 0 means the whole file.
class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line,
             const std::string& what)
      : Error(ErrorKind::parse, format(source, line, what)), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  static std::string format(const std::string& source, std::size_t line,
                            const std::string& what) {
    if (line == 0) return source + ": " + what;
    return source + ":" + std::to_string(line) + ": " + what;
  }

  std::size_t line_;
};

/// Undefined quantities, solver failures, out-of-range inversions.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what)
      : Error(ErrorKind::numerical, what) {}
};

/// Data inconsistent with the model (multi-pair contamination, A/B disagreement).
class ConsistencyError : public Error {
 public:
  explicit ConsistencyError(const std::string& what)
      : Error(ErrorKind::consistency, what) {}
};

constexpr int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_argument: return 1;
    case ErrorKind::parse: return 2;
    case ErrorKind::numerical: return 3;
    case ErrorKind::consistency: return 4;
  }
  return 1;
}

constexpr const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_argument: return "usage";
    case ErrorKind::parse: return "parse";
    case ErrorKind::numerical: return "numerical";
    case ErrorKind::consistency: return "consistency";
  }
  return "unknown";
}

}  // namespace pairstat
