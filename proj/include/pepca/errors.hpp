#pragma once

#include <stdexcept>
#include <string>

namespace pepca {

// Input files or user-supplied data that cannot be used: unreadable paths,
// malformed rows, label gaps, degenerate shapes discovered at run time.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-finite values produced while iterating. Carries how many iterations
// completed before the failure was detected.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, int iterations)
      : std::runtime_error(what), iterations_(iterations) {}

  int iterations() const noexcept { return iterations_; }

 private:
  int iterations_;
};

}  // namespace pepca
