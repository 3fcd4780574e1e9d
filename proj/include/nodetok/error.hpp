#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nodetok {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by the edge-list loader; carries the 1-based line number (0 when
/// the problem is not tied to a line, e.g. empty input).
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace nodetok
