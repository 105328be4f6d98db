#pragma once

#include <stdexcept>
#include <string>

namespace mgsched {

// Bad configuration, malformed traces, or a value outside its declared
// domain. The CLI maps this to exit code 1.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A deterministic guarantee of the controller did not hold (battery band,
// queue bound, balance). The CLI maps this to exit code 2.
class BoundViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The renewable surplus exceeds every sink (quality service, recharge,
// sale) and curtailment is disabled.
class UnservableSurplus : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mgsched
