#pragma once
#include <stdexcept>
#include <string>

namespace qmboot {

// Bad user input: malformed config, out-of-domain argument, impossible request.
// The CLI maps this to exit code 1.
struct InputError : std::runtime_error {
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// The computation itself failed: empty feasible set, vanished island,
// non-convergent eigensolve or fit. The CLI maps this to exit code 2.
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qmboot
