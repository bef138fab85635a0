#pragma once

#include <stdexcept>
#include <string>

namespace qprosumer {

// Malformed instance document (bad syntax, wrong types, missing fields).
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// Structurally valid input that violates a model invariant.
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Statevector would exceed the configured qubit cap.
struct ResourceError : std::runtime_error {
  explicit ResourceError(const std::string& msg) : std::runtime_error(msg) {}
};

// Exhaustive scan would exceed the hard enumeration bound.
struct SizeError : std::runtime_error {
  explicit SizeError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace qprosumer
