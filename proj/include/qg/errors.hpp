#pragma once

#include <stdexcept>
#include <string>

namespace qg {

// Malformed graphspec input. `line` is 1-based, 0 when not tied to a line.
struct parse_error : std::runtime_error {
  int line;
  explicit parse_error(const std::string& msg, int line_ = 0)
      : std::runtime_error(line_ > 0 ? "line " + std::to_string(line_) + ": " + msg : msg),
        line(line_) {}
};

// An operation was called outside its stated domain (self-loops, non-equilateral
// lengths, size caps, ...). The message names the violated assumption.
struct precondition_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A numerical decision could not be made safely (rank ambiguity, non-Hermitian
// input, enumeration overflow).
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace qg
