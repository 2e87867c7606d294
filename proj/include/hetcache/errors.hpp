#pragma once

#include <stdexcept>
#include <string>

namespace hetcache {

// Raised when a solver fails to converge or an internal consistency
// check (balance, stationarity) is violated.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

class InternalError : public std::runtime_error {
 public:
  explicit InternalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hetcache
