#pragma once

#include <stdexcept>
#include <string>

namespace bvm {

/// Domain error: bad input, violated precondition, exhausted resource cap.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Formula or theory text that does not parse; carries the byte offset.
struct ParseError : Error {
  size_t position;
  ParseError(const std::string& what, size_t pos)
      : Error(what + " at offset " + std::to_string(pos)), position(pos) {}
};

}  // namespace bvm
