#pragma once

#include <stdexcept>
#include <string>

namespace glp {

// Malformed or inconsistent input data; the CLI maps this to exit code 2.
struct DataError : std::runtime_error {
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Bad invocation (flags, option ranges); the CLI maps this to exit code 1.
struct UsageError : std::runtime_error {
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace glp
