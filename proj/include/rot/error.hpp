#pragma once

#include <stdexcept>
#include <string>

namespace rot {

// Malformed or out-of-range input. The CLI maps this to exit code 2.
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

// A numerical procedure failed to produce a trustworthy result
// (non-convergence, violated dual feasibility). The CLI maps this to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rot
