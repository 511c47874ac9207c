#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace specsynth {

// Input text could not be parsed. `position` is a 0-based character offset
// into the offending text when known, std::string::npos otherwise.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& message, std::size_t position = std::string::npos)
      : std::runtime_error(position == std::string::npos
                               ? message
                               : message + " (at position " + std::to_string(position) + ")"),
        position_(position) {}

  std::size_t position() const { return position_; }

private:
  std::size_t position_;
};

// A document or in-memory structure violates a model/automaton invariant.
class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(const std::string& message) : std::runtime_error(message) {}
};

}  // namespace specsynth
