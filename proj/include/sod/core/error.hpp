#pragma once

#include <stdexcept>
#include <string>

namespace sod {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invariant / precondition failures (bad values, shape mismatches).
class ValueError : public Error {
 public:
  explicit ValueError(const std::string& what) : Error(what) {}
};

// Filesystem and codec failures.
class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(what) {}
};

// Captioner / grounder / segmenter failures.
class BackendError : public Error {
 public:
  explicit BackendError(const std::string& what) : Error(what) {}
};

}  // namespace sod
