#pragma once

#include <stdexcept>
#include <string>

namespace gridshift {

// Base of everything the library throws. Callers that only care about
// "bad input" can catch this; the CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed coloring / distribution / DIMACS / map text.
class FormatError : public Error {
 public:
  using Error::Error;
};

// A PatternLayout that cannot be applied to the given grid.
class LayoutError : public Error {
 public:
  using Error::Error;
};

// Shapes or dimensions that do not line up (e.g. iso element vs grid).
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A model that does not decode to a coloring; always a broken formula.
class DecodeError : public Error {
 public:
  using Error::Error;
};

// A search that ran past its node budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace gridshift
