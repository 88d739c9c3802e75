#pragma once

#include <stdexcept>
#include <string>

namespace bnpmle {

enum class ErrorCode {
  invalid_argument,    // bad configuration or parameter values
  invalid_input,       // malformed data (CSV contents, non-finite samples)
  degenerate_support,  // fewer than two distinct sample values
  infeasible,          // configuration incompatible with the data (df > n, one-class data)
  numeric,             // overflow, weight underflow, solver failure
  io,                  // file access
  out_of_support       // evaluation outside [x1, xn]
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message)
    : std::runtime_error(message)
    , code_(code)
  {}

  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

} // namespace bnpmle
