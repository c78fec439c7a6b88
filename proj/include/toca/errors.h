#pragma once

#include <stdexcept>
#include <string>

namespace toca {

// Malformed input text. `line` is 1-based, 0 when not tied to a line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what
                                    : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Well-formed input that violates the network model (asymmetric links,
// self-loops, duplicate arcs, disconnected graphs, ...).
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller passed arguments that do not fit together.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The solver failed or returned something the algorithms cannot work with.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An instance is too large for exhaustive enumeration.
class RefusalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace toca
