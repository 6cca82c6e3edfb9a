#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace svine {

/// Root-finding or special-function failure. Carries the last search
/// bracket so callers can report where the iteration got stuck.
class numeric_error : public std::runtime_error {
 public:
  numeric_error(const std::string& msg, double bracket_lo, double bracket_hi)
      : std::runtime_error(msg), lo(bracket_lo), hi(bracket_hi) {}
  explicit numeric_error(const std::string& msg)
      : numeric_error(msg, std::numeric_limits<double>::quiet_NaN(),
                      std::numeric_limits<double>::quiet_NaN()) {}

  double lo;
  double hi;
};

/// Optimizer stopped at the iteration cap. The best-so-far result is still
/// usable; the inference layer reports it flagged as non-converged.
class convergence_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace svine
