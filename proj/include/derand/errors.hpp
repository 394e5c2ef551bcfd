#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace derand {

// Raised when text input (observable files, schedules, outcomes, states)
// cannot be parsed. line/column are 1-based; 0 means "not applicable".
class parse_error : public std::runtime_error {
 public:
  parse_error(const std::string& message, std::size_t line = 0, std::size_t column = 0)
      : std::runtime_error(render(message, line, column)), line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  static std::string render(const std::string& message, std::size_t line, std::size_t column) {
    std::string out;
    if (line > 0) {
      out += "line " + std::to_string(line);
      if (column > 0) out += ", column " + std::to_string(column);
      out += ": ";
    } else if (column > 0) {
      out += "column " + std::to_string(column) + ": ";
    }
    return out + message;
  }

  std::size_t line_;
  std::size_t column_;
};

// Length mismatch between Pauli strings that must share a qubit count.
class dimension_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Request exceeds a configured size cap (qubit counts, mostly).
class capacity_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace derand
