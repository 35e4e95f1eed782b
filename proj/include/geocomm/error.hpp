#pragma once

#include <stdexcept>
#include <string>

namespace geocomm {

/// Bad or inconsistent input data (malformed files, missing locations, ...).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The request is well-formed but cannot be satisfied, e.g. a similarity
/// modularity on a triangle-free graph or an unreachable target degree.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace geocomm
