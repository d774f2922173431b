#pragma once

#include <stdexcept>
#include <string>

namespace sod {

// Raised when a requested design has no feasible operating point, e.g. a
// fleet too small to complete cycles or a vehicle set with no valid size.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised by file readers/writers; messages carry path and row context.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sod
