#pragma once

#include <stdexcept>
#include <string>

namespace gpcover {

// Bad user input: malformed files, invalid parameters, broken tables.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// A configured resource cap was hit (closure cap, memo cap, search cap).
class CapError : public std::runtime_error {
 public:
  explicit CapError(const std::string& what) : std::runtime_error(what) {}
};

// A documented precondition failed at runtime (e.g. group not simple).
class PreconditionError : public std::runtime_error {
 public:
  explicit PreconditionError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace gpcover
