#pragma once

#include <stdexcept>
#include <string>

namespace jsgraph {

// Thrown when an input value lies outside a function's definition set
// (point outside a metric's disk, argument outside an oracle's strip, ...).
struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

// Degenerate geometric input: zero-area triangle, coincident polyline points.
struct DegenerateInputError : std::runtime_error {
  explicit DegenerateInputError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed textual input (expressions, JSON domain files, mesh files).
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// Non-finite values, singular linear systems, line-search stalls.
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// A requested operation is not supported for the given configuration
// (e.g. CMC polygon enumeration on a non-Euclidean metric).
struct UnsupportedError : std::runtime_error {
  explicit UnsupportedError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace jsgraph
