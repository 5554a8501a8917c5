#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace saturation {

/// Raised when input data is malformed or violates a dataset invariant.
/// `line` and `column` are 1-based positions in the source text; 0 means
/// the location is not applicable (e.g. a whole-file condition).
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& message, std::size_t line = 0,
                     std::size_t column = 0)
      : std::runtime_error(format(message, line, column)),
        line_(line),
        column_(column),
        reason_(message) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  static std::string format(const std::string& message, std::size_t line,
                            std::size_t column) {
    if (line == 0) return message;
    std::string out = "line " + std::to_string(line);
    if (column != 0) out += ", column " + std::to_string(column);
    return out + ": " + message;
  }

  std::size_t line_;
  std::size_t column_;
  std::string reason_;
};

}  // namespace saturation
