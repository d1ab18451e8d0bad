#pragma once

#include <stdexcept>
#include <string>

namespace bmdl {

// Numerical degeneracy while scoring a model: zero residual variance,
// collapsed baseline design, or too few rows for the requested structure.
struct ScoringError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input or configuration violates a documented precondition.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed textual input; `line` is 1-based, 0 when unknown.
struct ParseError : std::runtime_error {
  int line = 0;
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
  ParseError(const std::string& msg, int line_num)
      : std::runtime_error(msg), line(line_num) {}
};

}  // namespace bmdl
