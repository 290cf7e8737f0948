#pragma once

#include <stdexcept>
#include <string>

namespace osq {

enum class ErrorCode {
  invalid_parameter,   // a value violates a precondition
  above_threshold,     // parametric pump at or past oscillation threshold
  bistability,         // static radiation-pressure response is multivalued
  unstable_dynamics,   // drift is not asymptotically stable
  no_convergence,      // iteration exceeded its budget
  config_error,        // unreadable or inconsistent configuration
  io_error,            // filesystem failure
};

// All failures the library can diagnose carry a code plus a message that
// names the offending quantity, so callers can map them to exit codes.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

}  // namespace osq
